"""Arithmetic in F_{q^n}, q = p^h, as a single extension F_p[x]/(mu) of degree h*n.

Elements are plain ints: the coefficient vector ``(c_0, ..., c_{d-1})`` of
the reduced polynomial is stored as ``sum c_i p^i`` (a bitmask when p = 2).
:class:`FieldCtx` carries the int-level operations used in hot loops;
:class:`FFElement` wraps an int for the public API.

Fields with at most ``TABLE_LIMIT`` elements get exp/log tables built on
first use, which also serve as the discrete-log oracle for root extraction.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from importlib import resources
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from . import poly
from .exponents import Cyc, ExpLike, ExpSpec, QPowMinus1, reduce_exponent

TABLE_LIMIT = 1 << 20
MODULI_ENV = "SCATTERLAB_BUILTIN_MODULI"


class FieldError(ValueError):
    pass


class ReducibleModulus(FieldError):
    pass


class ContextMismatch(FieldError):
    pass


@lru_cache(maxsize=None)
def _load_moduli(path: str) -> Dict[Tuple[int, int], Tuple[int, ...]]:
    if path:
        with open(path) as fh:
            raw = json.load(fh)
    else:
        raw = json.loads(resources.files(__package__).joinpath("moduli.json").read_text())
    return {(int(p), int(d)): tuple(m) for p, row in raw.items() for d, m in row.items()}


def builtin_modulus(p: int, degree: int) -> Tuple[int, ...]:
    table = _load_moduli(os.environ.get(MODULI_ENV, ""))
    try:
        return table[(p, degree)]
    except KeyError:
        raise FieldError(f"no builtin modulus for p={p}, degree={degree}") from None


@dataclass(frozen=True)
class FieldCtx:
    """F_{q^n} with q = p^h.  Immutable; lookup tables are built lazily."""

    p: int
    h: int
    n: int
    modulus: Tuple[int, ...]

    def __post_init__(self):
        if not poly.is_prime(self.p):
            raise FieldError(f"p={self.p} is not prime")
        if self.h < 1 or self.n < 1:
            raise FieldError("h and n must be positive")
        m = tuple(int(c) % self.p for c in self.modulus)
        if len(poly.trim(m)) != self.h * self.n + 1:
            raise FieldError(
                f"modulus degree {len(poly.trim(m)) - 1} != h*n = {self.h * self.n}")
        m = poly.trim(m)
        if m[-1] != 1:
            inv = pow(m[-1], -1, self.p)
            m = [(c * inv) % self.p for c in m]
        if not poly.is_irreducible(m, self.p):
            raise ReducibleModulus(f"modulus {list(self.modulus)} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", tuple(m))

    # -- sizes ---------------------------------------------------------------

    @property
    def q(self) -> int:
        return self.p ** self.h

    @property
    def degree(self) -> int:
        return self.h * self.n

    @property
    def size(self) -> int:
        return self.p ** self.degree

    @property
    def group_order(self) -> int:
        return self.size - 1

    @property
    def has_tables(self) -> bool:
        return self.size <= TABLE_LIMIT

    def cyc(self, h: int, l: int) -> Cyc:
        """``C_{h,l}`` over this field's q."""
        return Cyc(self.q, h, l)

    def qpow_minus1(self, a: int) -> QPowMinus1:
        return QPowMinus1(self.q, a)

    def __repr__(self):
        return f"FieldCtx(GF({self.p}^{self.degree}), q={self.q}, n={self.n})"

    # -- encoding ------------------------------------------------------------

    def coeffs(self, a: int) -> List[int]:
        out = []
        for _ in range(self.degree):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, cs: Sequence[int]) -> int:
        cs = list(cs)
        if len(cs) > self.degree:
            if any(cs[self.degree:]):
                raise FieldError("coefficient vector longer than the field degree")
            cs = cs[:self.degree]
        v = 0
        for c in reversed(cs):
            v = v * self.p + (int(c) % self.p)
        return v

    def element(self, v: Union[int, Sequence[int]]) -> "FFElement":
        if not isinstance(v, int):
            v = self.from_coeffs(v)
        if not 0 <= v < self.size:
            raise FieldError(f"{v} is not an element encoding of {self!r}")
        return FFElement(self, v)

    def elements(self) -> List["FFElement"]:
        return [FFElement(self, v) for v in range(self.size)]

    @property
    def x(self) -> int:
        """The class of the indeterminate (the generator g of the examples)."""
        return self.p if self.degree > 1 else (-self.modulus[0]) % self.p

    # -- additive structure --------------------------------------------------

    @cached_property
    def _pw(self) -> List[int]:
        return [self.p ** i for i in range(self.degree)]

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p, out = self.p, 0
        for w in self._pw:
            out += ((a // w + b // w) % p) * w
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p, out = self.p, 0
        for w in self._pw:
            out += ((-(a // w)) % p) * w
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale(self, c: int, a: int) -> int:
        """Multiply by the prime-field scalar ``c``."""
        c %= self.p
        if self.p == 2:
            return a if c else 0
        p, out = self.p, 0
        for w in self._pw:
            out += ((a // w) * c % p) * w
        return out

    # -- multiplication without tables ---------------------------------------

    @cached_property
    def _mu_bits(self) -> int:
        return self.from_coeffs(self.modulus[:-1]) | (1 << self.degree)

    def _mul_slow(self, a: int, b: int) -> int:
        if self.p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                a <<= 1
                b >>= 1
            d, mu = self.degree, self._mu_bits
            for i in range(r.bit_length() - 1, d - 1, -1):
                if (r >> i) & 1:
                    r ^= mu << (i - d)
            return r
        prod = poly.mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p)
        return self.from_coeffs(prod)

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        while e > 0:
            if e & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return result

    # -- exp/log tables ------------------------------------------------------

    @cached_property
    def generator(self) -> int:
        """Smallest-encoding primitive element, trying x first."""
        N = self.group_order
        if N == 1:
            return 1
        primes = poly.prime_factors(N)
        candidates = itertools.chain([self.x], (v for v in range(2, self.size) if v != self.x))
        for g in candidates:
            if g and all(self._pow_slow(g, N // r) != 1 for r in primes):
                return g
        raise AssertionError("multiplicative group has no generator")

    @cached_property
    def _tables(self) -> Tuple[List[int], List[int]]:
        if not self.has_tables:
            raise FieldError(f"{self!r} is too large for log tables")
        N, g = self.group_order, self.generator
        exp = [0] * (2 * N)
        log = [-1] * self.size
        cur = 1
        if self.p == 2 and g == 2:
            top, mu = 1 << self.degree, self._mu_bits
            for i in range(N):
                exp[i] = cur
                log[cur] = i
                cur <<= 1
                if cur & top:
                    cur ^= mu
        else:
            for i in range(N):
                exp[i] = cur
                log[cur] = i
                cur = self._mul_slow(cur, g)
        exp[N:] = exp[:N]
        return exp, log

    @cached_property
    def np_exp(self) -> np.ndarray:
        return np.asarray(self._tables[0], dtype=np.int64)

    @cached_property
    def np_log(self) -> np.ndarray:
        return np.asarray(self._tables[1], dtype=np.int64)

    def log(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("log of zero")
        return self._tables[1][a]

    def exp(self, k: int) -> int:
        return self._tables[0][k % self.group_order]

    # -- multiplicative structure --------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            exp, log = self._tables
            return exp[log[a] + log[b]]
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.has_tables:
            exp, log = self._tables
            return exp[self.group_order - log[a]]
        return self._pow_slow(a, self.group_order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: ExpLike) -> int:
        if a == 0:
            if isinstance(e, ExpSpec):
                raise FieldError("power of zero is only defined for plain integer exponents")
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        k = reduce_exponent(e, self.group_order)
        if self.has_tables:
            exp, log = self._tables
            return exp[log[a] * k % self.group_order]
        return self._pow_slow(a, k)

    # -- Frobenius -----------------------------------------------------------

    @cached_property
    def _frob_p_images(self) -> List[int]:
        # images of the basis monomials x^t under a -> a^p
        return [self._pow_slow(self.p ** t, self.p) for t in range(self.degree)]

    @lru_cache(maxsize=None)
    def _frob_images(self, e: int) -> Tuple[int, ...]:
        """Matrix (as images of x^t) of the F_p-linear map a -> a^(p^e)."""
        e %= self.degree
        if e == 0:
            return tuple(self.p ** t for t in range(self.degree))
        prev = self._frob_images(e - 1)
        return tuple(self.apply_linear(self._frob_p_images, b) for b in prev)

    def apply_linear(self, images: Sequence[int], a: int) -> int:
        out, t = 0, 0
        if self.p == 2:
            while a:
                if a & 1:
                    out ^= images[t]
                a >>= 1
                t += 1
            return out
        while a:
            c = a % self.p
            if c:
                out = self.add(out, self.scale(c, images[t]))
            a //= self.p
            t += 1
        return out

    def frob_matrix(self, a: int, e: int) -> int:
        """``a^(p^e)`` through the precomputed F_p-linear Frobenius matrix."""
        return self.apply_linear(self._frob_images(e % self.degree), a)

    @cached_property
    def _ppow(self) -> List[int]:
        return [pow(self.p, e, self.group_order) for e in range(self.degree)]

    def frob_p(self, a: int, e: int) -> int:
        """``a^(p^e)``, e taken mod h*n."""
        if a == 0:
            return 0
        e %= self.degree
        if self.has_tables:
            exp, log = self._tables
            return exp[log[a] * self._ppow[e] % self.group_order]
        return self.frob_matrix(a, e)

    def frob(self, a: int, i: int) -> int:
        """``a^(q^i)``, i taken mod n."""
        return self.frob_p(a, self.h * (i % self.n))

    # -- numpy vector versions (table fields only) ---------------------------

    def vmul(self, a: np.ndarray, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.broadcast_to(np.asarray(b, dtype=np.int64), a.shape)
        la, lb = self.np_log[a], self.np_log[b]
        out = self.np_exp[np.where((a == 0) | (b == 0), 0, la + lb)]
        out[(a == 0) | (b == 0)] = 0
        return out

    def vinv(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.np_exp[self.group_order - self.np_log[a]]

    def vadd(self, a: np.ndarray, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._pw:
            out += ((a // w + b // w) % self.p) * w
        return out

    @lru_cache(maxsize=None)
    def frob_table(self, i: int) -> np.ndarray:
        """Lookup array of ``a -> a^(q^i)`` over all elements."""
        k = pow(self.q, i % self.n, self.group_order)
        out = self.np_exp[(self.np_log * k) % self.group_order]
        out[0] = 0
        out.setflags(write=False)
        return out

    def vfrob(self, a: np.ndarray, i: int) -> np.ndarray:
        return self.frob_table(i)[np.asarray(a, dtype=np.int64)]

    # -- power residues ------------------------------------------------------

    def is_power(self, a: int, d: ExpLike) -> bool:
        """Whether ``a = xi^d`` for some nonzero xi; ``a`` must be nonzero."""
        if a == 0:
            raise FieldError("power-residue test of zero")
        N = self.group_order
        dm = reduce_exponent(d, N)
        g = N if dm == 0 else math.gcd(N, dm)
        return self.pow(a, N // g) == 1

    def in_subfield(self, a: int, d: int) -> bool:
        """Whether ``a`` lies in F_{p^d}; d must divide h*n."""
        if d < 1 or self.degree % d:
            raise FieldError(f"F_{self.p}^{d} is not a subfield of {self!r}")
        return self.frob_p(a, d) == a

    def root(self, c: int, e: ExpLike) -> int:
        """Smallest-log solution ``a`` of ``a^e = c`` (c nonzero) via discrete logs."""
        N = self.group_order
        k = reduce_exponent(e, N)
        lc = self.log(c)
        g = math.gcd(k, N)
        if lc % g:
            raise FieldError("element is not an e-th power")
        Ng = N // g
        if Ng == 1:
            return 1
        t = (lc // g) * pow(k // g, -1, Ng) % Ng
        return self.exp(t)


@dataclass(frozen=True, eq=True)
class FFElement:
    ctx: FieldCtx
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FFElement):
            if other.ctx != self.ctx:
                raise ContextMismatch("operands live in different fields")
            return other.value
        if isinstance(other, int):
            return self.ctx.scale(other, 1)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.sub(b, self.value))

    def __neg__(self):
        return FFElement(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FFElement(self.ctx, self.ctx.div(self.value, b))

    def __pow__(self, e: ExpLike):
        return FFElement(self.ctx, self.ctx.pow(self.value, e))

    def inverse(self) -> "FFElement":
        return FFElement(self.ctx, self.ctx.inv(self.value))

    def frobenius(self, i: int = 1) -> "FFElement":
        return FFElement(self.ctx, self.ctx.frob(self.value, i))

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    @property
    def coeffs(self) -> List[int]:
        return self.ctx.coeffs(self.value)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else f"{c}" if i == 0 else f"{c}*{mono}")
        return f"FFElement({' + '.join(reversed(terms)) or '0'})"


def ctx_new(p: int, h: int, n: int, modulus: Union[str, Sequence[int]] = "builtin") -> FieldCtx:
    """Build and verify F_{q^n}, q = p^h.  ``"builtin"`` picks from the shipped table."""
    if not poly.is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if h < 1 or n < 1:
        raise FieldError("h and n must be positive")
    if isinstance(modulus, str):
        if modulus != "builtin":
            raise FieldError(f"unknown modulus selector {modulus!r}")
        modulus = builtin_modulus(p, h * n)
    return FieldCtx(p, h, n, tuple(int(c) for c in modulus))


def field_arith(op: str, a: FFElement, b=None) -> FFElement:
    """Dispatch ``add``/``mul``/``inv``/``pow``; ``pow`` takes an int or ExpSpec."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown field operation {op!r}")


def frobenius(a: FFElement, i: int) -> FFElement:
    return a.frobenius(i)


def is_in_subfield(a: FFElement, d: int) -> bool:
    return a.ctx.in_subfield(a.value, d)


def is_dth_power(a: FFElement, d: ExpLike) -> bool:
    return a.ctx.is_power(a.value, d)


def embedding(src: FieldCtx, dst: FieldCtx) -> Callable[[int], int]:
    """A field embedding F_src -> F_dst, sending x to the smallest root of src's modulus."""
    if src.p != dst.p or dst.degree % src.degree:
        raise FieldError(f"{src!r} does not embed in {dst!r}")
    mu = src.modulus

    def eval_mu(b: int) -> int:
        acc = 0
        for c in reversed(mu):
            acc = dst.add(dst.mul(acc, b), dst.scale(c, 1))
        return acc

    beta = next((b for b in range(1, dst.size) if eval_mu(b) == 0), None)
    if beta is None:
        raise FieldError("modulus has no root in the target field")
    powers = [1]
    for _ in range(src.degree - 1):
        powers.append(dst.mul(powers[-1], beta))

    def image(a: int) -> int:
        out = 0
        for c, bp in zip(src.coeffs(a), powers):
            if c:
                out = dst.add(out, dst.scale(c, bp))
        return out

    return image
