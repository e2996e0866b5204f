"""Sufficient conditions for scatteredness, evasiveness, cutting and
indecomposability of U_A^{I,J}, evaluated as decision procedures.

Every condition is one-directional: ``hypothesis-fails`` never means the
property is false, only that no guarantee is available.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .gf import Cyc, FieldCtx, QPowMinus1, reduce_exponent
from .seq import SequenceSpec, invariant_K_int, pi_int

GUARANTEED = "guaranteed"
FAILS = "hypothesis-fails"
NOT_APPLICABLE = "not-applicable"


@dataclass
class Check:
    name: str
    verdict: str
    values: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == GUARANTEED

    def to_json(self) -> Dict[str, Any]:
        return {"name": self.name, "verdict": self.verdict, "values": self.values}


@dataclass(frozen=True)
class Guarantee:
    """``U`` meets every r-dimensional F_{q^n}-subspace in F_q-dimension <= bound."""

    r: int
    bound: int
    source: str


@dataclass
class GuaranteeSet:
    evasive: List[Guarantee] = field(default_factory=list)
    scattered: bool = False
    exceptional: bool = False
    indecomposable: bool = False
    eventually_indecomposable: bool = False
    cutting: bool = False
    minimal_code: bool = False

    def to_json(self):
        out = asdict(self)
        out["evasive"] = [asdict(g) for g in self.evasive]
        return out


def _coeffs(ctx: FieldCtx, a: int) -> List[int]:
    return ctx.coeffs(a)


def _power_detail(ctx: FieldCtx, a: int, d) -> Dict[str, Any]:
    N = ctx.group_order
    g = math.gcd(N, reduce_exponent(d, N)) or N
    return {"value": _coeffs(ctx, a), "exponent": d.to_json(), "gcd_with_group_order": g,
            "is_power": ctx.is_power(a, d)}


# ---------------------------------------------------------------------------
# scatteredness and exceptionality
# ---------------------------------------------------------------------------

def scattered_criterion(spec: SequenceSpec) -> Check:
    ctx = spec.ctx
    kA = invariant_K_int(spec)
    detail = _power_detail(ctx, kA, Cyc(ctx.q, spec.K, spec.m))
    ok = spec.gcd_IJ == 1 and not detail["is_power"]
    return Check("scattered", GUARANTEED if ok else FAILS,
                 {"gcd_IJ": spec.gcd_IJ, "K_A": detail})


def exceptional_degrees(q: int, n: int, m: int, K: int, h_max: int, h_min: int = 1) -> List[int]:
    """All h in [h_min, h_max] with gcd(q^{mK} - 1, C_{n,h}) = 1."""
    A = q ** (m * K) - 1
    return [h for h in range(h_min, h_max + 1)
            if math.gcd(A, reduce_exponent(Cyc(q, n, h), A)) == 1]


def exceptionality_search(spec: SequenceSpec, h_max: int) -> List[int]:
    if h_max < 1:
        raise ValueError("h_max must be at least 1")
    return exceptional_degrees(spec.ctx.q, spec.ctx.n, spec.m, spec.K, h_max)


# ---------------------------------------------------------------------------
# Pi ratios
# ---------------------------------------------------------------------------

@dataclass
class PiTable:
    rows: List[Dict[str, Any]]
    all_delta: bool
    exists_delta: bool

    def to_json(self):
        return {"rows": self.rows, "all_delta": self.all_delta, "exists_delta": self.exists_delta}


def pi_ratio_int(spec: SequenceSpec, delta: int) -> int:
    return spec.ctx.div(pi_int(spec, delta + 2), pi_int(spec, 2))


def pi_conditions(spec: SequenceSpec) -> PiTable:
    ctx = spec.ctx
    d = QPowMinus1(ctx.q, spec.m * spec.K)
    rows = []
    for delta in range(1, spec.m):
        detail = _power_detail(ctx, pi_ratio_int(spec, delta), d)
        rows.append({"delta": delta, **detail})
    flags = [not r["is_power"] for r in rows]
    return PiTable(rows, all(flags), any(flags))


# ---------------------------------------------------------------------------
# evasiveness, cutting, indecomposability
# ---------------------------------------------------------------------------

def large_n_threshold(m: int, J: int) -> int:
    return 2 * (m * J + J + 1)


def evasive_guarantees(spec: SequenceSpec, pi: Optional[PiTable] = None) -> List[Guarantee]:
    pi = pi or pi_conditions(spec)
    m, n, J = spec.m, spec.ctx.n, spec.J
    out = []
    if n >= large_n_threshold(m, J):
        for r in range(2, m + 1):
            if r % 2:
                out.append(Guarantee(r, r * n // 2 - 1, "odd-r, n >= 2(mJ+J+1)"))
            elif pi.all_delta:
                out.append(Guarantee(r, r * n // 2 - 1, "even-r, n >= 2(mJ+J+1) and all-delta"))
    if pi.exists_delta:
        out.append(Guarantee(2 * m - 2, m * n - (2 * n - 2 * J), "exists-delta"))
    return out


def cutting_guarantee(spec: SequenceSpec, pi: Optional[PiTable] = None) -> Check:
    pi = pi or pi_conditions(spec)
    n, J = spec.ctx.n, spec.J
    ok = n >= 2 * J + 1 and pi.exists_delta
    return Check("cutting", GUARANTEED if ok else FAILS,
                 {"n": n, "min_n": 2 * J + 1, "exists_delta": pi.exists_delta,
                  "minimal_code": ok})


def first_lifting_degree(spec: SequenceSpec, search: int = 256) -> Optional[int]:
    """Smallest exceptional degree h with n*h >= 2(mJ+J+1), if one is found."""
    n = spec.ctx.n
    h0 = max(1, -(-large_n_threshold(spec.m, spec.J) // n))
    hs = exceptional_degrees(spec.ctx.q, n, spec.m, spec.K, h0 + search, h_min=h0)
    return hs[0] if hs else None


def indecomposability_report(spec: SequenceSpec, pi: Optional[PiTable] = None,
                             scattered: Optional[Check] = None) -> Check:
    pi = pi or pi_conditions(spec)
    scattered = scattered or scattered_criterion(spec)
    n = spec.ctx.n
    need = large_n_threshold(spec.m, spec.J)
    direct = n >= need and pi.all_delta
    eventually = scattered.holds and pi.all_delta
    values = {"n": n, "min_n": need, "all_delta": pi.all_delta,
              "scattered_criterion": scattered.verdict,
              "eventually_indecomposable": eventually}
    if eventually:
        values["first_lifting_degree"] = first_lifting_degree(spec)
    return Check("indecomposable", GUARANTEED if direct else FAILS, values)


def divisibility_check(spec: SequenceSpec, pi: Optional[PiTable] = None) -> Check:
    """all-delta must force m | n; a violation would contradict that implication."""
    pi = pi or pi_conditions(spec)
    m, n = spec.m, spec.ctx.n
    bad = pi.all_delta and n % m != 0
    return Check("m_divides_n", "violation" if bad else "consistent",
                 {"m": m, "n": n, "all_delta": pi.all_delta, "m_divides_n": n % m == 0})


# ---------------------------------------------------------------------------
# counting bounds
# ---------------------------------------------------------------------------

def c_qm(q: int, m: int) -> float:
    return 0.5 + (m / 2) / (q ** (m / 2) + 1)


@dataclass
class QBound:
    verdict: str
    Q: Optional[int] = None
    c: Optional[float] = None
    floor_bound: Optional[int] = None
    reason: str = ""

    def to_json(self):
        out = asdict(self)
        # Q can exceed the double range; keep it exact
        for k in ("Q", "floor_bound"):
            if out[k] is not None:
                out[k] = str(out[k])
        return out


def _counting_gate(n: int, m: int, K: int) -> str:
    if n % m:
        return "n is not a multiple of m"
    if K % m == 0:
        return "m divides K"
    return ""


def q_lower_bound(ctx: FieldCtx, m: int, I: int, J: int) -> QBound:
    q, n, K = ctx.q, ctx.n, J - I
    reason = _counting_gate(n, m, K)
    if reason:
        return QBound(NOT_APPLICABLE, reason=reason)
    n1 = n // m
    N = q ** n - 1
    denom = q ** (m * math.gcd(n1, K)) - 1
    bad = N // math.gcd(N, Cyc(q, K, m).value())
    for j in range(1, -(-(m - 1) // 2) + 1):
        term = N * (q ** math.gcd(m * n1, j) - 1)
        assert term % denom == 0
        bad += term // denom
    Q = N ** (m - 1) * (N - bad)
    c = c_qm(q, m)
    floor_bound = N ** (m - 1) * math.ceil(N * (1 - c))
    return QBound(GUARANTEED, Q, c, floor_bound)


@dataclass
class InequivBound:
    verdict: str
    value: Optional[float] = None
    reason: str = ""
    warnings: List[str] = field(default_factory=list)

    def to_json(self):
        return asdict(self)


def inequiv_lower_bound(ctx: FieldCtx, m: int, I: int, J: int) -> InequivBound:
    q, n, K = ctx.q, ctx.n, J - I
    reason = _counting_gate(n, m, K)
    if not reason and not (J > I and 2 * J > n):
        reason = "needs J > I and J > n/2"
    if reason:
        return InequivBound(NOT_APPLICABLE, reason=reason)
    n1 = n // m
    value = (1 - c_qm(q, m)) / (m * n * ctx.h) * q ** (m * math.gcd(n1, K))
    warn = ["the gate J > n/2 lies outside the J < n/2 range of the equivalence criterion"]
    return InequivBound(GUARANTEED, value, warnings=warn)


# ---------------------------------------------------------------------------
# full report
# ---------------------------------------------------------------------------

@dataclass
class CriterionReport:
    spec: SequenceSpec
    checks: List[Check]
    pi: PiTable
    guarantees: GuaranteeSet
    exceptional_degrees: List[int]
    q_bound: QBound
    inequiv_bound: InequivBound

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> Dict[str, Any]:
        return {"spec": self.spec.to_json(),
                "checks": {c.name: c.to_json() for c in self.checks},
                "pi_conditions": self.pi.to_json(),
                "guarantees": self.guarantees.to_json(),
                "exceptional_degrees": self.exceptional_degrees,
                "q_bound": self.q_bound.to_json(),
                "inequiv_bound": self.inequiv_bound.to_json()}


def check_spec(spec: SequenceSpec, h_max: int = 8) -> CriterionReport:
    pi = pi_conditions(spec)
    sc = scattered_criterion(spec)
    cut = cutting_guarantee(spec, pi)
    ind = indecomposability_report(spec, pi, sc)
    div = divisibility_check(spec, pi)
    ev = evasive_guarantees(spec, pi)
    gs = GuaranteeSet(evasive=ev, scattered=sc.holds, exceptional=sc.holds,
                      indecomposable=ind.holds,
                      eventually_indecomposable=ind.values["eventually_indecomposable"],
                      cutting=cut.holds, minimal_code=cut.holds)
    ctx = spec.ctx
    return CriterionReport(spec, [sc, cut, ind, div], pi, gs,
                           exceptionality_search(spec, h_max),
                           q_lower_bound(ctx, spec.m, spec.I, spec.J),
                           inequiv_lower_bound(ctx, spec.m, spec.I, spec.J))


# ---------------------------------------------------------------------------
# alpha-tuple sweeps
# ---------------------------------------------------------------------------

def tuple_count(ctx: FieldCtx, m: int) -> int:
    return ctx.group_order ** m


def tuple_at(ctx: FieldCtx, m: int, index: int) -> Tuple[int, ...]:
    """Mixed-radix decode; alpha_1 is the most significant digit, digits are value-1."""
    N = ctx.group_order
    out = []
    for _ in range(m):
        index, r = divmod(index, N)
        out.append(r + 1)
    return tuple(reversed(out))


def alpha_tuples(ctx: FieldCtx, m: int) -> Iterator[Tuple[int, ...]]:
    for i in range(tuple_count(ctx, m)):
        yield tuple_at(ctx, m, i)


def sweep_record(spec: SequenceSpec) -> Dict[str, Any]:
    """Compact per-tuple summary used by sweeps."""
    pi = pi_conditions(spec)
    sc = scattered_criterion(spec)
    return {"alphas": [spec.ctx.coeffs(a) for a in spec.alphas],
            "scattered": sc.verdict,
            "K_A_is_power": sc.values["K_A"]["is_power"],
            "pi_non_power": [not r["is_power"] for r in pi.rows],
            "all_delta": pi.all_delta,
            "exists_delta": pi.exists_delta,
            "cutting": cutting_guarantee(spec, pi).verdict}


def pi_sweep_counts(ctx: FieldCtx, m: int, I: int, J: int) -> Dict[str, int]:
    """Exhaustive all-delta / exists-delta / scattered counts over all alpha-tuples.

    Works in discrete-log coordinates: a = g^L is a d-th power iff L is
    divisible by gcd(d, q^n - 1), and Frobenius multiplies L by q^i.
    """
    N, q, K = ctx.group_order, ctx.q, J - I
    L = np.arange(N, dtype=np.int64)
    grids = np.meshgrid(*([L] * m), indexing="ij")
    logs = [g.ravel() for g in grids]                    # logs[i] = log alpha_{i+1}

    def qk(t):
        return pow(q, (t * K) % ctx.n, N)

    def pi_log(i):
        acc = np.zeros_like(logs[0])
        for t in range(m):
            acc = (acc + qk(t) * logs[(i + t) % m]) % N  # alpha_{i+1+t}, 0-based (i+t)
        return acc

    gd = math.gcd(N, reduce_exponent(QPowMinus1(q, m * K), N)) or N
    p2 = pi_log(2)
    non_power = [((pi_log(delta + 2) - p2) % N) % gd != 0 for delta in range(1, m)]
    all_d = np.logical_and.reduce(non_power)
    any_d = np.logical_or.reduce(non_power)

    num = np.zeros_like(logs[0])
    for t in range(m - 1):
        num = (num + qk(t) * logs[(2 + t) % m]) % N      # alpha_3, alpha_4^{q^K}, ...
    den = logs[1] * reduce_exponent(Cyc(q, K, m - 1), N) % N
    kA = (num - den) % N
    gc = math.gcd(N, reduce_exponent(Cyc(q, K, m), N)) or N
    scat = (kA % gc != 0) & (math.gcd(I, J) == 1)
    return {"tuples": int(N ** m), "all_delta": int(all_d.sum()), "exists_delta": int(any_d.sum()),
            "scattered": int(scat.sum()), "scattered_and_all_delta": int((scat & all_d).sum())}
