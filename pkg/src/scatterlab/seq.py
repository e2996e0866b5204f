"""The family U_A^{I,J} = {(x, f_1(x), ..., f_m(x))} with
f_i(x) = x_i^{q^I} + alpha_{i+1} x_{i+1}^{q^J}, indices cyclic in [1..m].

Subscripts are 1-based everywhere in this module, matching the formulas; the
cyclic convention ``m + 1 == 1`` is applied uniformly to alphas, x and Pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple, Union

from .gf import FFElement, FieldCtx, ctx_new, embedding
from .linalg import FqSubspace

ElemLike = Union[int, FFElement, Sequence[int]]


class SpecError(ValueError):
    pass


def _val(ctx: FieldCtx, a: ElemLike) -> int:
    if isinstance(a, FFElement):
        if a.ctx != ctx:
            raise SpecError("element from a different field")
        return a.value
    if isinstance(a, int):
        if not 0 <= a < ctx.size:
            raise SpecError(f"{a} is not an element of {ctx!r}")
        return a
    return ctx.from_coeffs(a)


@dataclass(frozen=True)
class SequenceSpec:
    ctx: FieldCtx
    m: int
    I: int
    J: int
    alphas: Tuple[int, ...]

    def __post_init__(self):
        if self.m < 3:
            raise SpecError("the family needs m >= 3")
        if not 0 <= self.I < self.J < self.ctx.n:
            raise SpecError(f"need 0 <= I < J < n, got I={self.I}, J={self.J}, n={self.ctx.n}")
        alphas = tuple(_val(self.ctx, a) for a in self.alphas)
        if len(alphas) != self.m:
            raise SpecError(f"expected {self.m} alphas, got {len(alphas)}")
        if any(a == 0 for a in alphas):
            raise SpecError("every alpha must be nonzero")
        object.__setattr__(self, "alphas", alphas)

    @property
    def K(self) -> int:
        return self.J - self.I

    @property
    def gcd_IJ(self) -> int:
        return math.gcd(self.I, self.J)

    def alpha(self, i: int) -> int:
        return self.alphas[(i - 1) % self.m]

    def alpha_elements(self) -> List[FFElement]:
        return [FFElement(self.ctx, a) for a in self.alphas]

    def with_alphas(self, alphas: Sequence[ElemLike]) -> "SequenceSpec":
        return SequenceSpec(self.ctx, self.m, self.I, self.J, tuple(alphas))

    def to_json(self) -> Dict[str, Any]:
        c = self.ctx
        return {"p": c.p, "h": c.h, "n": c.n, "modulus": list(c.modulus),
                "m": self.m, "I": self.I, "J": self.J,
                "alphas": [c.coeffs(a) for a in self.alphas]}

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "SequenceSpec":
        missing = [k for k in ("p", "h", "n", "m", "I", "J", "alphas") if k not in obj]
        if missing:
            raise SpecError(f"spec is missing keys: {', '.join(missing)}")
        ctx = ctx_new(int(obj["p"]), int(obj["h"]), int(obj["n"]), obj.get("modulus", "builtin"))
        alphas = []
        for a in obj["alphas"]:
            if isinstance(a, int):
                raise SpecError("alphas must be coefficient vectors (lists of ints)")
            alphas.append(ctx.from_coeffs(a))
        return cls(ctx, int(obj["m"]), int(obj["I"]), int(obj["J"]), tuple(alphas))


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

def f_int(spec: SequenceSpec, i: int, x: Sequence[int]) -> int:
    ctx, m = spec.ctx, spec.m
    xi = x[(i - 1) % m]
    xn = x[i % m]
    return ctx.add(ctx.frob(xi, spec.I), ctx.mul(spec.alpha(i + 1), ctx.frob(xn, spec.J)))


def lift_ints(spec: SequenceSpec, x: Sequence[int]) -> Tuple[int, ...]:
    return tuple(x) + tuple(f_int(spec, i, x) for i in range(1, spec.m + 1))


def eval_f(spec: SequenceSpec, i: int, x: Sequence[ElemLike]) -> FFElement:
    if not 1 <= i <= spec.m:
        raise SpecError(f"f index {i} outside 1..{spec.m}")
    xs = [_val(spec.ctx, a) for a in x]
    return FFElement(spec.ctx, f_int(spec, i, xs))


def lift_point(spec: SequenceSpec, x: Sequence[ElemLike]) -> Tuple[FFElement, ...]:
    if len(x) != spec.m:
        raise SpecError(f"expected {spec.m} coordinates")
    xs = [_val(spec.ctx, a) for a in x]
    return tuple(FFElement(spec.ctx, v) for v in lift_ints(spec, xs))


def membership_ints(spec: SequenceSpec, v: Sequence[int]) -> bool:
    m = spec.m
    x = v[:m]
    return all(v[m + i - 1] == f_int(spec, i, x) for i in range(1, m + 1))


def membership(spec: SequenceSpec, v: Sequence[ElemLike]) -> bool:
    if len(v) != 2 * spec.m:
        raise SpecError(f"expected a vector of length {2 * spec.m}")
    return membership_ints(spec, [_val(spec.ctx, a) for a in v])


def generator_vectors(spec: SequenceSpec) -> List[Tuple[int, ...]]:
    """Lifts of ``b * e_i`` for b in the F_p power basis, ordered by i then b."""
    ctx, m = spec.ctx, spec.m
    out = []
    for i in range(m):
        for t in range(ctx.degree):
            x = [0] * m
            x[i] = ctx.p ** t
            out.append(lift_ints(spec, x))
    return out


def fq_generators(spec: SequenceSpec) -> FqSubspace:
    U = FqSubspace.from_vectors(spec.ctx, 2 * spec.m, generator_vectors(spec))
    if U.fp_rank != spec.m * spec.ctx.degree:
        raise ArithmeticError(
            f"generator rank {U.fp_rank} != m*h*n = {spec.m * spec.ctx.degree}; broken context")
    return U


# ---------------------------------------------------------------------------
# algebraic invariants
# ---------------------------------------------------------------------------

def invariant_K_int(spec: SequenceSpec) -> int:
    ctx, m, K = spec.ctx, spec.m, spec.K
    num = 1
    for t in range(m - 1):
        # alpha_3, alpha_4^{q^K}, ..., alpha_m^{q^{(m-3)K}}, alpha_1^{q^{(m-2)K}}
        num = ctx.mul(num, ctx.frob(spec.alpha(3 + t), t * K))
    den = ctx.pow(spec.alpha(2), ctx.cyc(K, m - 1))
    return ctx.div(num, den)


def invariant_K(spec: SequenceSpec) -> FFElement:
    return FFElement(spec.ctx, invariant_K_int(spec))


def pi_int(spec: SequenceSpec, i: int) -> int:
    ctx, K = spec.ctx, spec.K
    out = 1
    for t in range(spec.m):
        # alpha_{i+1}, alpha_{i+2}^{q^K}, ..., alpha_i^{q^{(m-1)K}}
        out = ctx.mul(out, ctx.frob(spec.alpha(i + 1 + t), t * K))
    return out


def invariant_Pi(spec: SequenceSpec, i: int) -> FFElement:
    return FFElement(spec.ctx, pi_int(spec, i))


def delta_value(spec: SequenceSpec) -> FFElement:
    return invariant_Pi(spec, 2)


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------

def extend(spec: SequenceSpec, factor: int, modulus="builtin") -> SequenceSpec:
    """The same alphas, I, J over F_{q^{n*factor}} (alphas pushed through an embedding)."""
    src = spec.ctx
    dst = ctx_new(src.p, src.h, src.n * factor, modulus)
    emb = embedding(src, dst)
    return SequenceSpec(dst, spec.m, spec.I, spec.J, tuple(emb(a) for a in spec.alphas))
