"""ΓL(2m, q^n)-equivalence between members of the family.

Two sets with the same (I, J) are equivalent iff for some automorphism
sigma: x -> x^{p^e} one of the invariants

    C_delta = prod_{t=0}^{m-1} (abar_{delta+1+t} / sigma(alpha_{2+t}))^{q^{tK}}

is a (q^{mK} - 1)-th power.  When it is, an explicit block-monomial matrix
realising the equivalence is built and checked point by point.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .criteria import inequiv_lower_bound, pi_conditions, scattered_criterion, tuple_at
from .gf import FieldCtx, QPowMinus1
from .linalg import rref_qn
from .seq import SequenceSpec, generator_vectors, membership_ints

EQUIVALENT = "equivalent"
BY_CRITERION = "inequivalent-by-criterion"
BY_INDEX = "inequivalent-by-index"
DEFERRED = "deferred"


class HypothesisError(ValueError):
    """The pair lies outside the range where the equivalence results apply."""


class WitnessError(RuntimeError):
    """A constructed matrix failed verification."""


@dataclass
class EquivVerdict:
    verdict: str
    in_theorem_range: bool = True
    e: Optional[int] = None
    delta: Optional[int] = None
    matrix: Optional[List[List[List[int]]]] = None
    table: List[Dict[str, Any]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


def _same_family(A: SequenceSpec, B: SequenceSpec) -> None:
    if A.ctx != B.ctx:
        raise ValueError("the two sets live over different fields")
    if A.m != B.m:
        raise ValueError("the two sets have different orders m")


# ---------------------------------------------------------------------------
# index comparison
# ---------------------------------------------------------------------------

def index_verdict(A: SequenceSpec, B: SequenceSpec) -> str:
    _same_family(A, B)
    n = A.ctx.n
    if A.J + B.J >= n:
        raise HypothesisError(f"J + J0 = {A.J + B.J} is not below n = {n}")
    if (A.I, A.J) != (B.I, B.J):
        return BY_INDEX
    return DEFERRED


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def range_problems(spec: SequenceSpec) -> List[str]:
    out = []
    if not 2 * spec.J < spec.ctx.n:
        out.append(f"J = {spec.J} is not below n/2 = {spec.ctx.n / 2}")
    if spec.gcd_IJ != 1:
        out.append(f"gcd(I, J) = {spec.gcd_IJ}")
    return out


def _gate(A: SequenceSpec, B: SequenceSpec, strict: bool) -> List[str]:
    _same_family(A, B)
    if (A.I, A.J) != (B.I, B.J):
        raise ValueError("the invariant criterion compares sets with the same (I, J)")
    problems = range_problems(A)
    if problems and strict:
        raise HypothesisError("; ".join(problems))
    return problems


def sigma(ctx: FieldCtx, a: int, e: int) -> int:
    return ctx.frob_p(a, e)


def c_value(A: SequenceSpec, B: SequenceSpec, e: int, delta: int) -> int:
    ctx, m, K = A.ctx, A.m, A.K
    out = 1
    for t in range(m):
        ratio = ctx.div(B.alpha(delta + 1 + t), sigma(ctx, A.alpha(2 + t), e))
        out = ctx.mul(out, ctx.frob(ratio, t * K))
    return out


def c_invariants(A: SequenceSpec, B: SequenceSpec, e: int, strict: bool = True) -> List[int]:
    """[C_1, ..., C_m] for the automorphism x -> x^{p^e}."""
    _gate(A, B, strict)
    if not 0 <= e < A.ctx.degree:
        raise ValueError(f"automorphism index {e} outside [0, {A.ctx.degree})")
    return [c_value(A, B, e, delta) for delta in range(1, A.m + 1)]


def _power_exp(spec: SequenceSpec) -> QPowMinus1:
    return QPowMinus1(spec.ctx.q, spec.m * spec.K)


def invariant_table(A: SequenceSpec, B: SequenceSpec, strict: bool = True) -> List[Dict[str, Any]]:
    _gate(A, B, strict)
    ctx, d = A.ctx, _power_exp(A)
    rows = []
    for e in range(ctx.degree):
        for delta, c in enumerate(c_invariants(A, B, e, strict=False), start=1):
            rows.append({"e": e, "delta": delta, "C": ctx.coeffs(c), "is_power": ctx.is_power(c, d)})
    return rows


# ---------------------------------------------------------------------------
# witness matrices
# ---------------------------------------------------------------------------

def _cyc(i: int, m: int) -> int:
    return (i - 1) % m + 1


def build_witness(A: SequenceSpec, B: SequenceSpec, e: int, delta: int) -> List[List[int]]:
    """The 2m x 2m block-monomial matrix diag(P, P^{q^I}) for (e, delta)."""
    ctx, m, I, K = A.ctx, A.m, A.I, A.K
    c = c_value(A, B, e, delta)
    d = _power_exp(A)
    if not ctx.is_power(c, d):
        raise ValueError(f"C_{delta} at e={e} is not a (q^(mK)-1)-th power")
    # seed a = P[delta, 1] solves a^(q^{mK}-1) = C^(-q^{-I})
    a = ctx.root(ctx.frob(ctx.inv(c), -I), d)
    P = [[0] * m for _ in range(m)]
    i, j = delta, 1
    P[i - 1][j - 1] = a
    for _ in range(m - 1):
        # P[i-1, j-1] = (abar_i / A_j)^(q^{-I}) * P[i, j]^(q^K)
        ratio = ctx.div(B.alpha(i), sigma(ctx, A.alpha(j), e))
        val = ctx.mul(ctx.frob(ratio, -I), ctx.frob(P[i - 1][j - 1], K))
        i, j = _cyc(i - 1, m), _cyc(j - 1, m)
        P[i - 1][j - 1] = val
    M = [[0] * (2 * m) for _ in range(2 * m)]
    for r in range(m):
        for s in range(m):
            M[r][s] = P[r][s]
            M[m + r][m + s] = ctx.frob(P[r][s], I)
    return M


def _apply(ctx: FieldCtx, M: Sequence[Sequence[int]], v: Sequence[int]) -> Tuple[int, ...]:
    out = []
    for row in M:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = ctx.add(acc, ctx.mul(a, b))
        out.append(acc)
    return tuple(out)


def verify_witness(A: SequenceSpec, B: SequenceSpec, e: int, M: Sequence[Sequence[int]]) -> List[str]:
    """Problems found with M as a map u -> M sigma(u) from U_A onto U_B (empty if none)."""
    ctx = A.ctx
    problems = []
    rk = len(rref_qn(ctx, M)[1])
    if rk != 2 * A.m:
        problems.append(f"matrix has rank {rk} < {2 * A.m}")
    for u in generator_vectors(A):
        v = _apply(ctx, M, [sigma(ctx, x, e) for x in u])
        if not membership_ints(B, v):
            problems.append("generator image outside the target set")
            break
    return problems


def build_and_verify_witness(A: SequenceSpec, B: SequenceSpec, e: int, delta: int) -> List[List[int]]:
    M = build_witness(A, B, e, delta)
    problems = verify_witness(A, B, e, M)
    if problems:
        raise WitnessError(f"witness for e={e}, delta={delta} failed: {'; '.join(problems)}")
    return M


def matrix_json(ctx: FieldCtx, M) -> List[List[List[int]]]:
    return [[ctx.coeffs(a) for a in row] for row in M]


def are_equivalent(A: SequenceSpec, B: SequenceSpec, strict: bool = True) -> EquivVerdict:
    problems = _gate(A, B, strict)
    table = invariant_table(A, B, strict=False)
    notes = [f"outside the range of the criterion: {p}" for p in problems]
    failures = []
    for row in table:
        if not row["is_power"]:
            continue
        try:
            M = build_and_verify_witness(A, B, row["e"], row["delta"])
        except WitnessError as exc:
            failures.append(str(exc))
            continue
        return EquivVerdict(EQUIVALENT, not problems, row["e"], row["delta"],
                            matrix_json(A.ctx, M), table, notes + failures)
    if failures:
        # a power was found but no matrix verified: possible misreading of the criterion
        return EquivVerdict("unverified", not problems, table=table,
                            notes=notes + failures + ["falsification candidate"])
    return EquivVerdict(BY_CRITERION, not problems, table=table, notes=notes)


def construct_partner(A: SequenceSpec, e: int, delta: int, xi: int, others: Sequence[int]) -> SequenceSpec:
    """A set B with C_delta(A, B, e) = xi^(q^{mK}-1), hence equivalent to A.

    ``others`` fixes abar_j for the m-1 indices j != delta+1; abar_{delta+1}
    (the t = 0 factor of C_delta) is then solved for.
    """
    ctx, m, K = A.ctx, A.m, A.K
    target = ctx.pow(xi, _power_exp(A))
    free = _cyc(delta + 1, m)
    abar = {}
    it = iter(others)
    for j in range(1, m + 1):
        if j != free:
            abar[j] = next(it)
    rest = 1
    for t in range(1, m):
        j = _cyc(delta + 1 + t, m)
        ratio = ctx.div(abar[j], sigma(ctx, A.alpha(2 + t), e))
        rest = ctx.mul(rest, ctx.frob(ratio, t * K))
    abar[free] = ctx.mul(ctx.div(target, rest), sigma(ctx, A.alpha(2), e))
    return A.with_alphas([abar[j] for j in range(1, m + 1)])


# ---------------------------------------------------------------------------
# class counting
# ---------------------------------------------------------------------------

def _equivalent_by_criterion(A: SequenceSpec, B: SequenceSpec) -> bool:
    ctx, d = A.ctx, _power_exp(A)
    return any(ctx.is_power(c_value(A, B, e, delta), d)
               for e in range(ctx.degree) for delta in range(1, A.m + 1))


def count_inequivalent(ctx: FieldCtx, m: int, I: int, J: int, budget: int) -> Dict[str, Any]:
    """Greedy class partition of the first ``budget`` alpha-tuples that pass the
    scattered and all-delta conditions, compared through the invariant criterion.

    The partition is order dependent (first-come representatives); the number
    of classes is exact whenever the criterion applies.
    """
    bound = inequiv_lower_bound(ctx, m, I, J)
    total = ctx.group_order ** m
    scanned = min(budget, total)
    reps: List[SequenceSpec] = []
    passing = 0
    for idx in range(scanned):
        spec = SequenceSpec(ctx, m, I, J, tuple_at(ctx, m, idx))
        if not (scattered_criterion(spec).holds and pi_conditions(spec).all_delta):
            continue
        passing += 1
        if not any(_equivalent_by_criterion(r, spec) for r in reps):
            reps.append(spec)
    probe = SequenceSpec(ctx, m, I, J, (1,) * m)
    problems = range_problems(probe)
    return {"tuples_scanned": scanned, "tuples_total": total, "passing": passing,
            "classes": len(reps),
            "representatives": [[ctx.coeffs(a) for a in r.alphas] for r in reps],
            "bound": bound.to_json(), "in_theorem_range": not problems,
            "range_problems": problems,
            "bound_ceiling": math.ceil(bound.value) if bound.value is not None else None}
