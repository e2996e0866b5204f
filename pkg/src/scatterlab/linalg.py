"""Exact linear algebra over F_p (flattened coordinates) and over F_{q^n}.

Vectors over F_{q^n} are tuples of element ints.  Flattening concatenates
the F_p coordinate vectors of the entries, entry ``j`` occupying columns
``j*d .. j*d + d - 1`` with d = h*n.  Over F_2 a flattened vector is a single
int bitmask, so rows of :class:`FpMatrix` are ints there and lists otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from .gf import FieldCtx

Vec = Tuple[int, ...]


# ---------------------------------------------------------------------------
# F_p matrices
# ---------------------------------------------------------------------------

@dataclass
class FpMatrix:
    p: int
    ncols: int
    rows: list = field(default_factory=list)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def stack(self, other: "FpMatrix") -> "FpMatrix":
        if (self.p, self.ncols) != (other.p, other.ncols):
            raise ValueError("shape mismatch")
        return FpMatrix(self.p, self.ncols, list(self.rows) + list(other.rows))

    def row_list(self, i: int) -> List[int]:
        r = self.rows[i]
        if self.p == 2:
            return [(r >> j) & 1 for j in range(self.ncols)]
        return list(r)


def _rref_gf2(rows: Sequence[int]) -> Tuple[List[int], List[int]]:
    work = [r for r in rows if r]
    out: List[int] = []
    pivots: List[int] = []
    while work:
        # pivot on the lowest set column among the remaining rows
        piv_row = min(work, key=lambda r: r & -r)
        bit = piv_row & -piv_row
        work.remove(piv_row)
        work = [r ^ piv_row if r & bit else r for r in work]
        work = [r for r in work if r]
        out = [r ^ piv_row if r & bit else r for r in out]
        out.append(piv_row)
        pivots.append(bit.bit_length() - 1)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order], [pivots[i] for i in order]


def _rref_modp(rows: Sequence[Sequence[int]], p: int, ncols: int) -> Tuple[List[List[int]], List[int]]:
    m = [list(r) for r in rows]
    pivots: List[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [(c * inv) % p for c in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] % p:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(m):
            break
    return m[:rank], pivots


def rref(M: FpMatrix) -> Tuple[FpMatrix, List[int]]:
    if M.p == 2:
        rows, piv = _rref_gf2(M.rows)
    else:
        rows, piv = _rref_modp(M.rows, M.p, M.ncols)
    return FpMatrix(M.p, M.ncols, rows), piv


def rank(M: FpMatrix) -> int:
    if M.p == 2:
        # XOR basis keyed by leading bit; cheaper than a full reduced form
        basis: dict = {}
        for r in M.rows:
            while r:
                top = r.bit_length() - 1
                if top in basis:
                    r ^= basis[top]
                else:
                    basis[top] = r
                    break
        return len(basis)
    return len(_rref_modp(M.rows, M.p, M.ncols)[1])


def nullspace(M: FpMatrix) -> FpMatrix:
    """Basis of ``{v : M v = 0}`` as rows in the same packing as ``M``."""
    R, piv = rref(M)
    free = [j for j in range(M.ncols) if j not in set(piv)]
    out = []
    for f in free:
        if M.p == 2:
            v = 1 << f
            for r, pc in zip(R.rows, piv):
                if (r >> f) & 1:
                    v |= 1 << pc
        else:
            v = [0] * M.ncols
            v[f] = 1
            for r, pc in zip(R.rows, piv):
                v[pc] = (-r[f]) % M.p
        out.append(v)
    return FpMatrix(M.p, M.ncols, out)


# ---------------------------------------------------------------------------
# flattening F_{q^n}^k <-> F_p^{k d}
# ---------------------------------------------------------------------------

def flatten(ctx: FieldCtx, v: Sequence[int]):
    d = ctx.degree
    if ctx.p == 2:
        out = 0
        for j, a in enumerate(v):
            out |= a << (d * j)
        return out
    out = []
    for a in v:
        out.extend(ctx.coeffs(a))
    return out


def unflatten(ctx: FieldCtx, row, k: int) -> Vec:
    d = ctx.degree
    if ctx.p == 2:
        mask = (1 << d) - 1
        return tuple((row >> (d * j)) & mask for j in range(k))
    return tuple(ctx.from_coeffs(row[d * j:d * (j + 1)]) for j in range(k))


# ---------------------------------------------------------------------------
# F_{q^n}-subspaces
# ---------------------------------------------------------------------------

def rref_qn(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[int]]:
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    rank_ = 0
    for col in range(ncols):
        piv = next((i for i in range(rank_, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank_], m[piv] = m[piv], m[rank_]
        inv = ctx.inv(m[rank_][col])
        m[rank_] = [ctx.mul(inv, a) for a in m[rank_]]
        for i in range(len(m)):
            f = m[i][col]
            if i != rank_ and f:
                m[i] = [ctx.sub(a, ctx.mul(f, b)) for a, b in zip(m[i], m[rank_])]
        pivots.append(col)
        rank_ += 1
        if rank_ == len(m):
            break
    return m[:rank_], pivots


@dataclass(frozen=True)
class FqnSubspace:
    """F_{q^n}-subspace of F_{q^n}^k stored by its (unique) reduced row echelon basis."""

    ctx: FieldCtx
    k: int
    basis: Tuple[Vec, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return span_qn(self.ctx, list(self.basis) + [tuple(v)], self.k).dim == self.dim

    def annihilator(self) -> "FqnSubspace":
        """``{c : c . v = 0 for all v in self}``, i.e. the defining equations."""
        return nullspace_qn(self.ctx, self.basis, self.k)

    def to_json(self):
        return [[self.ctx.coeffs(a) for a in row] for row in self.basis]


def span_qn(ctx: FieldCtx, vectors: Sequence[Sequence[int]], k: Optional[int] = None) -> FqnSubspace:
    vectors = [tuple(v) for v in vectors]
    if k is None:
        if not vectors:
            raise ValueError("ambient dimension needed for an empty span")
        k = len(vectors[0])
    if any(len(v) != k for v in vectors):
        raise ValueError("vectors of mixed length")
    rows, _ = rref_qn(ctx, vectors) if vectors else ([], [])
    return FqnSubspace(ctx, k, tuple(tuple(r) for r in rows))


def span_equal(S: FqnSubspace, T: FqnSubspace) -> bool:
    if S.ctx != T.ctx or S.k != T.k:
        raise ValueError("subspaces live in different ambient spaces")
    return S.basis == T.basis


def nullspace_qn(ctx: FieldCtx, rows: Sequence[Sequence[int]], k: int) -> FqnSubspace:
    R, piv = rref_qn(ctx, rows) if rows else ([], [])
    pivset = set(piv)
    out = []
    for f in range(k):
        if f in pivset:
            continue
        v = [0] * k
        v[f] = 1
        for r, pc in zip(R, piv):
            v[pc] = ctx.neg(r[f])
        out.append(v)
    return span_qn(ctx, out, k)


# ---------------------------------------------------------------------------
# F_q-subspaces (as F_p-spaces of flattened vectors)
# ---------------------------------------------------------------------------

@dataclass
class FqSubspace:
    """F_q-subspace of F_{q^n}^k, kept as an F_p generator matrix of flattened vectors."""

    ctx: FieldCtx
    k: int
    gens: FpMatrix
    fp_rank: int = -1

    def __post_init__(self):
        if self.gens.ncols != self.k * self.ctx.degree:
            raise ValueError("generator width does not match the ambient space")
        if self.fp_rank < 0:
            self.fp_rank = rank(self.gens)

    @classmethod
    def from_vectors(cls, ctx: FieldCtx, k: int, vectors: Sequence[Sequence[int]]) -> "FqSubspace":
        rows = [flatten(ctx, v) for v in vectors]
        return cls(ctx, k, FpMatrix(ctx.p, k * ctx.degree, rows))

    @classmethod
    def from_fqn(cls, S: FqnSubspace) -> "FqSubspace":
        ctx = S.ctx
        basis_fp = [ctx.p ** t for t in range(ctx.degree)]
        vecs = [tuple(ctx.mul(b, a) for a in row) for row in S.basis for b in basis_fp]
        return cls.from_vectors(ctx, S.k, vecs)

    @property
    def dim(self) -> int:
        """Dimension over F_q."""
        if self.fp_rank % self.ctx.h:
            raise ArithmeticError("F_p-rank not divisible by h: not an F_q-space")
        return self.fp_rank // self.ctx.h

    def vectors(self) -> List[Vec]:
        return [unflatten(self.ctx, r, self.k) for r in self.gens.rows]

    def basis(self) -> List[Vec]:
        R, _ = rref(self.gens)
        return [unflatten(self.ctx, r, self.k) for r in R.rows]

    def intersection(self, other: "FqSubspace") -> "FqSubspace":
        """``self ∩ other`` via the kernel of ``[A; -B]``."""
        _check_same(self, other)
        p = self.ctx.p
        A, B = rref(self.gens)[0], rref(other.gens)[0]
        a, b = A.nrows, B.nrows
        if a == 0 or b == 0:
            return FqSubspace(self.ctx, self.k, FpMatrix(p, self.gens.ncols, []), 0)
        # relations sum x_i A_i = sum y_j B_j live in the left kernel of [A; B]
        cols = [A.row_list(i) for i in range(a)] + [B.row_list(j) for j in range(b)]
        T = [[cols[i][c] for i in range(a + b)] for c in range(self.gens.ncols)]
        if p == 2:
            T = [sum(bit << i for i, bit in enumerate(r)) for r in T]
        K = nullspace(FpMatrix(p, a + b, T))
        out = []
        for i in range(K.nrows):
            coef = K.row_list(i)[:a]
            if p == 2:
                v = 0
                for c, r in zip(coef, A.rows):
                    if c:
                        v ^= r
            else:
                v = [0] * self.gens.ncols
                for c, r in zip(coef, A.rows):
                    if c:
                        v = [(x + c * y) % p for x, y in zip(v, r)]
            out.append(v)
        return FqSubspace(self.ctx, self.k, FpMatrix(p, self.gens.ncols, out))


def _check_same(A: FqSubspace, B: FqSubspace) -> None:
    if A.ctx != B.ctx or A.k != B.k:
        raise ValueError("subspaces live in different ambient spaces")


def intersect_dim(A: FqSubspace, B: FqSubspace) -> int:
    """``dim_{F_q}(A ∩ B)`` from ``dim A + dim B - dim(A + B)``."""
    _check_same(A, B)
    total = rank(A.gens.stack(B.gens))
    fp = A.fp_rank + B.fp_rank - total
    if fp % A.ctx.h:
        raise ArithmeticError("intersection F_p-dimension not divisible by h")
    return fp // A.ctx.h


# ---------------------------------------------------------------------------
# enumeration of F_{q^n}-subspaces by RREF pivot pattern
# ---------------------------------------------------------------------------

def gaussian_binomial(k: int, r: int, Q: int) -> int:
    if r < 0 or r > k:
        return 0
    num, den = 1, 1
    for i in range(r):
        num *= Q ** (k - i) - 1
        den *= Q ** (i + 1) - 1
    return num // den


def pivot_patterns(k: int, r: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations(range(k), r))


def free_positions(pattern: Sequence[int], k: int) -> List[Tuple[int, int]]:
    """Free (row, col) entries of an RREF with the given pivot columns, row-major."""
    piv = set(pattern)
    return [(i, c) for i, pc in enumerate(pattern) for c in range(pc + 1, k) if c not in piv]


def pattern_count(pattern: Sequence[int], k: int, Q: int) -> int:
    return Q ** len(free_positions(pattern, k))


def rref_from_index(ctx: FieldCtx, k: int, pattern: Sequence[int], index: int) -> List[List[int]]:
    """The ``index``-th RREF matrix of a pattern; the first free entry is most significant."""
    Q = ctx.size
    free = free_positions(pattern, k)
    rows = [[0] * k for _ in pattern]
    for i, pc in enumerate(pattern):
        rows[i][pc] = 1
    for (i, c) in reversed(free):
        index, rows[i][c] = divmod(index, Q)
    if index:
        raise IndexError("free-entry index out of range for pattern")
    return rows


def enumerate_subspaces(ctx: FieldCtx, k: int, r: int,
                        patterns: Optional[Sequence[Sequence[int]]] = None) -> Iterator[FqnSubspace]:
    """Every r-dimensional subspace of F_{q^n}^k exactly once, in (pattern, index) order.

    ``patterns`` restricts the scan to a slice of pivot patterns, which is how
    parallel scans split the work.
    """
    if not 0 <= r <= k:
        raise ValueError("need 0 <= r <= k")
    if patterns is None:
        patterns = pivot_patterns(k, r)
    Q = ctx.size
    for pat in patterns:
        free = free_positions(pat, k)
        for digits in itertools.product(range(Q), repeat=len(free)):
            rows = [[0] * k for _ in pat]
            for i, pc in enumerate(pat):
                rows[i][pc] = 1
            for (i, c), v in zip(free, digits):
                rows[i][c] = v
            yield FqnSubspace(ctx, k, tuple(tuple(row) for row in rows))


def subspace_at(ctx: FieldCtx, k: int, r: int, global_index: int) -> FqnSubspace:
    """Inverse of the enumeration order: the subspace at a global stream position."""
    for pat in pivot_patterns(k, r):
        cnt = pattern_count(pat, k, ctx.size)
        if global_index < cnt:
            rows = rref_from_index(ctx, k, pat, global_index)
            return FqnSubspace(ctx, k, tuple(tuple(x) for x in rows))
        global_index -= cnt
    raise IndexError("global index beyond the number of subspaces")


def randbelow(rng, n: int) -> int:
    """Uniform integer in ``[0, n)`` for arbitrarily large n from a numpy Generator."""
    if n <= 0:
        raise ValueError("empty range")
    nbytes = (n.bit_length() + 7) // 8 + 1
    bound = (256 ** nbytes // n) * n
    while True:
        v = int.from_bytes(rng.bytes(nbytes), "little")
        if v < bound:
            return v % n


def random_subspace_index(rng, ctx: FieldCtx, k: int, r: int) -> int:
    return randbelow(rng, gaussian_binomial(k, r, ctx.size))

