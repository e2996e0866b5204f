"""Brute-force checks of scatteredness, evasiveness, cutting and the second
generalized weight on concrete instances.

Subspace scans enumerate the defining equations of each F_{q^n}-subspace W
(its annihilator, in canonical RREF) and compute dim(U ∩ W) as the kernel of
the F_p-linear map ``b -> (c . sum_j b_j u_j)_c``.  Characteristic 2 runs in
numba kernels; other characteristics use the pure-Python path, which also
serves as the reference implementation in tests.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .gf import FieldCtx
from .linalg import (FpMatrix, FqSubspace, flatten, free_positions, gaussian_binomial,
                     nullspace, nullspace_qn, pattern_count, pivot_patterns, randbelow,
                     rank, span_qn, subspace_at)
from .seq import SequenceSpec, generator_vectors, lift_ints

DEFAULT_POINT_BUDGET = 1 << 24
DEFAULT_SUBSPACE_BUDGET = 1 << 25
CHUNK = 1 << 18
POINT_CHUNK = 1 << 18

Target = Union[SequenceSpec, FqSubspace]


class BudgetExceeded(RuntimeError):
    pass


class UnsupportedInstance(ValueError):
    pass


@dataclass
class OracleVerdict:
    property: str
    mode: str
    passed: bool
    conclusive: bool
    enumerated: int
    budget: int
    seed: Optional[int] = None
    statistic: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


# ---------------------------------------------------------------------------
# targets
# ---------------------------------------------------------------------------

@dataclass
class _Space:
    ctx: FieldCtx
    k: int
    gens: List[Tuple[int, ...]]      # F_p-independent generators

    @property
    def fp_dim(self) -> int:
        return len(self.gens)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.gens, dtype=np.int64).reshape(len(self.gens), self.k)


def _space(target: Target) -> _Space:
    if isinstance(target, SequenceSpec):
        return _Space(target.ctx, 2 * target.m, generator_vectors(target))
    if isinstance(target, FqSubspace):
        return _Space(target.ctx, target.k, target.basis())
    raise TypeError(f"cannot test {type(target).__name__}")


def _vec_json(ctx: FieldCtx, v: Sequence[int]) -> List[List[int]]:
    return [ctx.coeffs(a) for a in v]


def _fp_to_fq(ctx: FieldCtx, fp: int) -> int:
    if fp % ctx.h:
        raise ArithmeticError("F_p-dimension not divisible by h")
    return fp // ctx.h


# ---------------------------------------------------------------------------
# pure-Python reference computations
# ---------------------------------------------------------------------------

def _image_matrix(ctx: FieldCtx, gens, C) -> FpMatrix:
    """Row j: the F_p coordinates of (c_i . u_j)_i."""
    rows = []
    for u in gens:
        vals = [0] * len(C)
        for i, c in enumerate(C):
            acc = 0
            for cc, uu in zip(c, u):
                if cc and uu:
                    acc = ctx.add(acc, ctx.mul(cc, uu))
            vals[i] = acc
        rows.append(flatten(ctx, vals))
    return FpMatrix(ctx.p, len(C) * ctx.degree, rows)


def meet_dim_reference(ctx: FieldCtx, gens, C) -> int:
    """F_p-dimension of span(gens) ∩ {v : C v = 0}; gens must be F_p-independent."""
    if not C:
        return len(gens)
    return len(gens) - rank(_image_matrix(ctx, gens, C))


def meet_vectors_reference(ctx: FieldCtx, gens, C) -> List[Tuple[int, ...]]:
    """An F_p-basis of span(gens) ∩ {v : C v = 0}."""
    k = len(gens[0])
    if not C:
        return list(gens)
    M = _image_matrix(ctx, gens, C)
    # left kernel of M: transpose, then right kernel
    cols = [M.row_list(j) for j in range(M.nrows)]
    T = [[cols[j][t] for j in range(M.nrows)] for t in range(M.ncols)]
    if ctx.p == 2:
        T = [sum(bit << j for j, bit in enumerate(r)) for r in T]
    K = nullspace(FpMatrix(ctx.p, M.nrows, T))
    out = []
    for i in range(K.nrows):
        coef = K.row_list(i)
        v = [0] * k
        for b, u in zip(coef, gens):
            if b:
                v = [ctx.add(x, ctx.scale(b, y)) for x, y in zip(v, u)]
        out.append(tuple(v))
    return out


def span_dim_reference(ctx: FieldCtx, gens, c) -> int:
    vecs = meet_vectors_reference(ctx, gens, [list(c)])
    return span_qn(ctx, vecs, len(c)).dim if vecs else 0


# ---------------------------------------------------------------------------
# scan plumbing
# ---------------------------------------------------------------------------

def _numba_ok(sp: _Space, width: int) -> bool:
    return sp.ctx.p == 2 and sp.ctx.has_tables and width <= 62


def _tasks(k: int, a: int, Q: int) -> List[Tuple[Tuple[int, ...], int, int, int]]:
    """(pattern, lo, hi, global offset) slices covering the whole stream."""
    out = []
    offset = 0
    for pat in pivot_patterns(k, a):
        cnt = pattern_count(pat, k, Q)
        for lo in range(0, cnt, CHUNK):
            out.append((pat, lo, min(cnt, lo + CHUNK), offset))
        offset += cnt
    return out


def _pattern_arrays(pat, k):
    free = free_positions(pat, k)
    fr = np.asarray([i for i, _ in free], dtype=np.int64)
    fc = np.asarray([c for _, c in free], dtype=np.int64)
    return np.asarray(pat, dtype=np.int64), fr, fc


def _pmap(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(t) for t in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _sample_indices(total: int, samples: int, seed: int) -> List[int]:
    rng = np.random.default_rng(seed)
    return [randbelow(rng, total) for _ in range(samples)]


def _annihilator_rows(ctx: FieldCtx, k: int, a: int, index: int) -> List[List[int]]:
    return [list(r) for r in subspace_at(ctx, k, a, index).basis]


def _meet_max(sp: _Space, dim: int, mode: str, budget: int, seed: int, workers: int,
              force_python: bool = False) -> Dict[str, Any]:
    """Max of dim_p(U ∩ W) over W of F_{q^n}-dimension ``dim`` (all, or a sample)."""
    ctx, k = sp.ctx, sp.k
    if not 0 <= dim <= k:
        raise ValueError(f"subspace dimension {dim} outside 0..{k}")
    a = k - dim
    Q = ctx.size
    total = gaussian_binomial(k, a, Q)
    fast = not force_python and _numba_ok(sp, a * ctx.degree)
    hist = np.zeros(sp.fp_dim + 1, dtype=np.int64)

    if mode == "exhaustive":
        if total > budget:
            raise BudgetExceeded(f"{total} subspaces exceed the budget of {budget}")
        if fast:
            from . import _kernels as K
            U = sp.as_array()
            exp, log = ctx.np_exp, ctx.np_log

            def run(task):
                pat, lo, hi, off = task
                piv, fr, fc = _pattern_arrays(pat, k)
                h = np.zeros_like(hist)
                best, idx = K.meet_scan(U, piv, fr, fc, Q, ctx.degree, exp, log, lo, hi, h)
                return best, idx + off, h

            results = _pmap(run, _tasks(k, a, Q), workers)
            best, best_idx = -1, -1
            for b, i, h in results:
                hist += h
                if b > best:
                    best, best_idx = b, i
        else:
            best, best_idx = -1, -1
            for idx in range(total):
                C = _annihilator_rows(ctx, k, a, idx)
                v = meet_dim_reference(ctx, sp.gens, C)
                hist[v] += 1
                if v > best:
                    best, best_idx = v, idx
        enumerated = total
    elif mode == "sampled":
        idxs = _sample_indices(total, budget, seed)
        Cs = [_annihilator_rows(ctx, k, a, i) for i in idxs]
        if fast and Cs:
            from . import _kernels as K
            arr = np.asarray(Cs, dtype=np.int64).reshape(len(Cs), a, k)
            vals = K.meet_batch(sp.as_array(), arr, ctx.degree, ctx.np_exp, ctx.np_log).tolist()
        else:
            vals = [meet_dim_reference(ctx, sp.gens, C) for C in Cs]
        best, best_idx = -1, -1
        for pos, v in enumerate(vals):
            hist[v] += 1
            if v > best:
                best, best_idx = v, idxs[pos]
        enumerated = len(idxs)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return {"max_fp": best, "argmax": best_idx, "hist": hist, "total": total,
            "enumerated": enumerated, "annihilator_dim": a}


def _meet_witness(sp: _Space, a: int, index: int) -> Dict[str, Any]:
    ctx, k = sp.ctx, sp.k
    C = _annihilator_rows(ctx, k, a, index)
    W = nullspace_qn(ctx, C, k)
    meet = meet_vectors_reference(ctx, sp.gens, C)
    return {"stream_index": index,
            "subspace_basis": [_vec_json(ctx, r) for r in W.basis],
            "equations": [_vec_json(ctx, r) for r in C],
            "intersection_fp_basis": [_vec_json(ctx, v) for v in meet]}


def _hist_json(ctx: FieldCtx, hist: np.ndarray) -> Dict[str, int]:
    """Histogram keyed by F_q-dimension (only occupied bins)."""
    return {str(i // ctx.h): int(c) for i, c in enumerate(hist.tolist()) if c}


# ---------------------------------------------------------------------------
# public oracles
# ---------------------------------------------------------------------------

def verify_evasive(target: Target, h: int, r: int, mode: str = "exhaustive",
                   budget: Optional[int] = None, seed: int = 0, workers: int = 1,
                   force_python: bool = False) -> OracleVerdict:
    """Whether every h-dimensional F_{q^n}-subspace meets U in F_q-dimension <= r."""
    sp = _space(target)
    if budget is None:
        budget = DEFAULT_SUBSPACE_BUDGET if mode == "exhaustive" else 10_000
    res = _meet_max(sp, h, mode, budget, seed, workers, force_python)
    ctx = sp.ctx
    best = _fp_to_fq(ctx, res["max_fp"])
    passed = best <= r
    witness = None
    if not passed:
        witness = _meet_witness(sp, res["annihilator_dim"], res["argmax"])
    return OracleVerdict(
        property=f"evasive({h},{r})", mode=mode, passed=passed,
        conclusive=(mode == "exhaustive" or not passed), enumerated=res["enumerated"],
        budget=budget, seed=seed if mode == "sampled" else None,
        statistic={"max_intersection_dim": best, "argmax_index": res["argmax"],
                   "subspaces_total": str(res["total"]),
                   "intersection_histogram": _hist_json(ctx, res["hist"])},
        witness=witness)


def second_weight(target: Target, mode: str = "exhaustive", budget: Optional[int] = None,
                  seed: int = 0, workers: int = 1, force_python: bool = False) -> OracleVerdict:
    """dim_{F_q} U - max dim_{F_q}(U ∩ W) over W of F_{q^n}-codimension 2.

    Exhaustive mode gives the exact value; sampled mode only sees part of the
    maximum, so its value is an upper bound.
    """
    sp = _space(target)
    if budget is None:
        budget = DEFAULT_SUBSPACE_BUDGET if mode == "exhaustive" else 10_000
    res = _meet_max(sp, sp.k - 2, mode, budget, seed, workers, force_python)
    ctx = sp.ctx
    dim_u = _fp_to_fq(ctx, sp.fp_dim)
    best = _fp_to_fq(ctx, res["max_fp"])
    value = dim_u - best
    return OracleVerdict(
        property="second_weight", mode=mode, passed=True, conclusive=(mode == "exhaustive"),
        enumerated=res["enumerated"], budget=budget, seed=seed if mode == "sampled" else None,
        statistic={"value": value, "kind": "exact" if mode == "exhaustive" else "upper_bound",
                   "dim_U": dim_u, "max_intersection_dim": best, "argmax_index": res["argmax"],
                   "intersection_histogram": _hist_json(ctx, res["hist"])})


def verify_cutting(target: Target, mode: str = "exhaustive", budget: Optional[int] = None,
                   seed: int = 0, workers: int = 1, force_python: bool = False) -> OracleVerdict:
    """Whether U ∩ H spans H over F_{q^n} for every hyperplane H."""
    sp = _space(target)
    ctx, k = sp.ctx, sp.k
    if budget is None:
        budget = DEFAULT_SUBSPACE_BUDGET if mode == "exhaustive" else 10_000
    Q = ctx.size
    total = gaussian_binomial(k, 1, Q)
    fast = not force_python and _numba_ok(sp, ctx.degree + sp.fp_dim)
    hist = np.zeros(k + 1, dtype=np.int64)
    worst, worst_idx = k + 1, -1

    if mode == "exhaustive":
        if total > budget:
            raise BudgetExceeded(f"{total} hyperplanes exceed the budget of {budget}")
        if fast:
            from . import _kernels as K
            U = sp.as_array()
            exp, log, order = ctx.np_exp, ctx.np_log, ctx.group_order

            def run(task):
                pat, lo, hi, off = task
                piv, fr, fc = _pattern_arrays(pat, k)
                h = np.zeros_like(hist)
                w, idx = K.cutting_scan(U, piv, fr, fc, Q, ctx.degree, exp, log, order, lo, hi, h)
                return w, idx + off, h

            for w, i, h in _pmap(run, _tasks(k, 1, Q), workers):
                hist += h
                if w < worst:
                    worst, worst_idx = w, i
        else:
            for idx in range(total):
                s = span_dim_reference(ctx, sp.gens, _annihilator_rows(ctx, k, 1, idx)[0])
                hist[s] += 1
                if s < worst:
                    worst, worst_idx = s, idx
        enumerated = total
    elif mode == "sampled":
        idxs = _sample_indices(total, budget, seed)
        Cs = [_annihilator_rows(ctx, k, 1, i) for i in idxs]
        if fast and Cs:
            from . import _kernels as K
            arr = np.asarray(Cs, dtype=np.int64).reshape(len(Cs), 1, k)
            vals = K.cutting_batch(sp.as_array(), arr, ctx.degree, ctx.np_exp, ctx.np_log,
                                   ctx.group_order).tolist()
        else:
            vals = [span_dim_reference(ctx, sp.gens, C[0]) for C in Cs]
        for pos, s in enumerate(vals):
            hist[s] += 1
            if s < worst:
                worst, worst_idx = s, idxs[pos]
        enumerated = len(idxs)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    passed = worst >= k - 1
    witness = None
    if not passed:
        C = _annihilator_rows(ctx, k, 1, worst_idx)
        meet = meet_vectors_reference(ctx, sp.gens, C)
        witness = {"stream_index": worst_idx, "hyperplane_equation": _vec_json(ctx, C[0]),
                   "span_dim": worst,
                   "span_basis": [_vec_json(ctx, r) for r in span_qn(ctx, meet, k).basis]
                   if meet else []}
    return OracleVerdict(
        property="cutting", mode=mode, passed=passed,
        conclusive=(mode == "exhaustive" or not passed), enumerated=enumerated, budget=budget,
        seed=seed if mode == "sampled" else None,
        statistic={"min_span_dim": worst, "hyperplane_dim": k - 1,
                   "hyperplanes_total": str(total),
                   "span_histogram": {str(i): int(c) for i, c in enumerate(hist.tolist()) if c}},
        witness=witness)


# ---------------------------------------------------------------------------
# scatteredness by projective fiber counting
# ---------------------------------------------------------------------------

def _lift_block(spec: SequenceSpec, idx: np.ndarray) -> np.ndarray:
    """Lifted points for the lexicographic point indices ``idx`` (x_1 most significant)."""
    ctx, m, Q = spec.ctx, spec.m, spec.ctx.size
    xs = []
    rest = idx.copy()
    for _ in range(m):
        xs.append(rest % Q)
        rest //= Q
    xs.reverse()
    fi, fj = ctx.frob_table(spec.I), ctx.frob_table(spec.J)
    cols = list(xs)
    for i in range(m):
        a = spec.alpha(i + 2)
        cols.append(ctx.vadd(fi[xs[i]], ctx.vmul(fj[xs[(i + 1) % m]], a)))
    return np.stack(cols, axis=1)


def _canonical_keys(ctx: FieldCtx, pts: np.ndarray) -> np.ndarray:
    nz = pts != 0
    first = np.argmax(nz, axis=1)
    lead = pts[np.arange(len(pts)), first]
    inv = ctx.vinv(lead)
    scaled = ctx.vmul(pts, inv[:, None])
    Q = ctx.size
    key = np.zeros(len(pts), dtype=np.int64)
    for c in range(pts.shape[1]):
        key = key * Q + scaled[:, c]
    return key


def _check_table_field(spec: SequenceSpec) -> None:
    if not spec.ctx.has_tables:
        raise UnsupportedInstance("fiber counting needs a field with log tables (<= 2^20)")


def verify_scattered(spec: SequenceSpec, mode: str = "exhaustive", budget: Optional[int] = None,
                     seed: int = 0, workers: int = 1) -> OracleVerdict:
    """Every F_{q^n}-line meets U in an F_q-space of dimension <= 1."""
    if not isinstance(spec, SequenceSpec):
        raise TypeError("verify_scattered takes a SequenceSpec; use verify_evasive(U, 1, 1)")
    ctx, m = spec.ctx, spec.m
    if mode == "sampled":
        return _scattered_sampled(spec, budget or 10_000, seed)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    _check_table_field(spec)
    budget = DEFAULT_POINT_BUDGET if budget is None else budget
    total = ctx.size ** m
    if total > budget:
        raise BudgetExceeded(f"{total} points exceed the budget of {budget}")
    if ctx.size ** (2 * m) >= 1 << 63:
        raise UnsupportedInstance("projective keys do not fit in 64 bits")

    keys = np.empty(total - 1, dtype=np.int64)
    starts = list(range(1, total, POINT_CHUNK))

    def run(lo):
        hi = min(total, lo + POINT_CHUNK)
        keys[lo - 1:hi - 1] = _canonical_keys(ctx, _lift_block(spec, np.arange(lo, hi, dtype=np.int64)))

    _pmap(run, starts, workers)
    uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
    q1 = ctx.q - 1
    sizes, size_counts = np.unique(counts, return_counts=True)
    bad = np.nonzero(counts != q1)[0]
    witness = None
    if len(bad):
        # the offending fiber met first in enumeration order
        b = bad[np.argmin(first[bad])]
        members = (np.nonzero(keys == uniq[b])[0] + 1).tolist()
        witness = _fiber_witness(spec, members)
    return OracleVerdict(
        property="scattered", mode="exhaustive", passed=not len(bad), conclusive=True,
        enumerated=total - 1, budget=budget,
        statistic={"nonzero_vectors": total - 1, "fibers": int(len(uniq)),
                   "fiber_sizes": {str(int(s)): int(c) for s, c in zip(sizes, size_counts)},
                   "expected_fiber_size": q1},
        witness=witness)


def _point(spec: SequenceSpec, index: int) -> Tuple[int, ...]:
    Q = spec.ctx.size
    x = []
    for _ in range(spec.m):
        index, r = divmod(index, Q)
        x.append(r)
    return lift_ints(spec, list(reversed(x)))


def _fiber_witness(spec: SequenceSpec, members: List[int]) -> Dict[str, Any]:
    ctx = spec.ctx
    v = _point(spec, members[0])
    i0 = next(i for i, a in enumerate(v) if a)
    for idx in members[1:]:
        w = _point(spec, idx)
        lam = ctx.div(w[i0], v[i0])
        if not ctx.in_subfield(lam, ctx.h):
            return {"v": _vec_json(ctx, v), "w": _vec_json(ctx, w), "ratio": ctx.coeffs(lam),
                    "fiber_size": len(members)}
    raise AssertionError("oversized fiber without an F_q-independent pair")


def _scattered_sampled(spec: SequenceSpec, samples: int, seed: int) -> OracleVerdict:
    ctx, m = spec.ctx, spec.m
    k = 2 * m
    gens = generator_vectors(spec)
    total = ctx.size ** m
    rng = np.random.default_rng(seed)
    worst, witness = 0, None
    for _ in range(samples):
        idx = 1 + randbelow(rng, total - 1)
        v = _point(spec, idx)
        C = [list(r) for r in nullspace_qn(ctx, [v], k).basis]
        dim = _fp_to_fq(ctx, meet_dim_reference(ctx, gens, C))
        if dim > worst:
            worst = dim
            if dim > 1 and witness is None:
                meet = meet_vectors_reference(ctx, gens, C)
                witness = {"v": _vec_json(ctx, v), "line_meet_fp_basis": [_vec_json(ctx, u) for u in meet]}
    return OracleVerdict(
        property="scattered", mode="sampled", passed=worst <= 1, conclusive=worst > 1,
        enumerated=samples, budget=samples, seed=seed,
        statistic={"max_line_intersection_dim": worst}, witness=witness)
