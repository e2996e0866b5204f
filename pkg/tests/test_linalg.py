import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scatterlab.gf import ctx_new
from scatterlab.linalg import (FpMatrix, FqSubspace, enumerate_subspaces, flatten,
                               gaussian_binomial, intersect_dim, nullspace, nullspace_qn,
                               pattern_count, pivot_patterns, randbelow, rank, rref,
                               span_equal, span_qn, subspace_at, unflatten)
from scatterlab.seq import fq_generators, lift_ints


def bits(s):
    """'110' -> int with column 0 = first character."""
    return sum(int(c) << i for i, c in enumerate(s))


# -- F_p matrices --------------------------------------------------------------


def test_rank_examples():
    assert rank(FpMatrix(2, 3, [0, 0])) == 0
    assert rank(FpMatrix(2, 4, [1 << i for i in range(4)])) == 4
    assert rank(FpMatrix(2, 3, [bits("110"), bits("011"), bits("101")])) == 2
    assert rank(FpMatrix(3, 3, [[1, 2, 0], [2, 1, 0], [0, 0, 1]])) == 2


gf2_rows = st.lists(st.integers(0, (1 << 8) - 1), max_size=10)
gf3_rows = st.lists(st.lists(st.integers(0, 2), min_size=5, max_size=5), max_size=7)


@given(gf2_rows)
def test_gf2_rref_is_idempotent_and_rank_consistent(rows):
    M = FpMatrix(2, 8, rows)
    R, piv = rref(M)
    assert rref(R)[0].rows == R.rows
    assert len(piv) == rank(M) == R.nrows
    N = nullspace(M)
    assert N.nrows + rank(M) == 8
    for v in N.rows:
        assert all(bin(r & v).count("1") % 2 == 0 for r in rows)


@given(gf3_rows)
def test_modp_rref_nullspace(rows):
    M = FpMatrix(3, 5, rows)
    R, piv = rref(M)
    assert rref(R)[0].rows == R.rows
    N = nullspace(M)
    assert N.nrows + len(piv) == 5
    for v in N.rows:
        for r in rows:
            assert sum(a * b for a, b in zip(r, v)) % 3 == 0


@given(gf2_rows, st.randoms(use_true_random=False))
def test_rref_is_canonical_under_row_operations(rows, rnd):
    # the reduced form depends only on the row space
    mixed = list(rows)
    for _ in range(len(mixed)):
        if len(mixed) > 1:
            i, j = rnd.sample(range(len(mixed)), 2)
            mixed[i] ^= mixed[j]
    rnd.shuffle(mixed)
    assert rref(FpMatrix(2, 8, rows))[0].rows == rref(FpMatrix(2, 8, mixed))[0].rows


# -- flattening and F_{q^n} subspaces -------------------------------------------


def test_flatten_roundtrip(f8):
    ctx3 = ctx_new(3, 1, 2)
    for ctx in (f8, ctx3):
        for v in itertools.product(range(ctx.size), repeat=2):
            assert unflatten(ctx, flatten(ctx, v), 2) == tuple(v)


def test_rref_qn_canonical(f8):
    rng = np.random.default_rng(1)
    for _ in range(50):
        vecs = [tuple(int(x) for x in rng.integers(0, 8, 4)) for _ in range(3)]
        S = span_qn(f8, vecs, 4)
        c = int(rng.integers(1, 8))
        scaled = [tuple(f8.mul(c, a) for a in vecs[0])] + [
            tuple(f8.add(a, b) for a, b in zip(vecs[1], vecs[0])), vecs[2]]
        assert span_equal(S, span_qn(f8, scaled, 4))
        assert span_qn(f8, S.basis, 4).basis == S.basis


def test_annihilator_dimension_and_orthogonality(f8):
    rng = np.random.default_rng(2)
    for _ in range(30):
        vecs = [tuple(int(x) for x in rng.integers(0, 8, 5)) for _ in range(int(rng.integers(1, 4)))]
        S = span_qn(f8, vecs, 5)
        A = S.annihilator()
        assert A.dim + S.dim == 5
        for c in A.basis:
            for v in S.basis:
                acc = 0
                for a, b in zip(c, v):
                    acc = f8.add(acc, f8.mul(a, b))
                assert acc == 0
        assert span_equal(nullspace_qn(f8, A.basis, 5), S)


def test_contains(f8):
    S = span_qn(f8, [(1, 2, 0), (0, 1, 3)], 3)
    v = tuple(f8.add(f8.mul(5, a), f8.mul(6, b)) for a, b in zip((1, 2, 0), (0, 1, 3)))
    assert S.contains(v)
    assert S.dim == 2 and not S.contains((0, 0, 1))


# -- F_q subspaces ---------------------------------------------------------------


def test_intersect_dim_examples(f8, reference):
    U = fq_generators(reference)
    assert intersect_dim(U, U) == U.dim == 9
    left = FqSubspace.from_vectors(f8, 2, [(1, 0), (2, 0), (4, 0)])
    right = FqSubspace.from_vectors(f8, 2, [(0, 1), (0, 2), (0, 4)])
    assert intersect_dim(left, right) == 0
    # a line through a point of a scattered set meets it in dimension 1
    v = lift_ints(reference, (1, 3, 5))
    line = FqSubspace.from_fqn(span_qn(f8, [v], 6))
    assert intersect_dim(U, line) == 1


def test_intersection_matches_dimension_formula(f8):
    rng = np.random.default_rng(3)
    for _ in range(30):
        A = FqSubspace.from_vectors(f8, 2, [tuple(int(x) for x in rng.integers(0, 8, 2)) for _ in range(3)])
        B = FqSubspace.from_vectors(f8, 2, [tuple(int(x) for x in rng.integers(0, 8, 2)) for _ in range(3)])
        meet = A.intersection(B)
        assert meet.dim == intersect_dim(A, B)
        for v in meet.vectors():
            assert intersect_dim(A, FqSubspace.from_vectors(f8, 2, [v])) == (1 if any(v) else 0)


def test_fq_space_over_f4():
    ctx = ctx_new(2, 2, 2)
    S = FqSubspace.from_fqn(span_qn(ctx, [(1, 3)], 2))
    # one F_16-line is an F_4-space of dimension n = 2
    assert S.fp_rank == 4 and S.dim == 2


# -- subspace enumeration ------------------------------------------------------


def test_gaussian_binomial_examples():
    assert gaussian_binomial(2, 1, 8) == 9
    assert gaussian_binomial(6, 2, 8) == (8 ** 6 - 1) * (8 ** 5 - 1) // ((8 ** 2 - 1) * (8 - 1))
    assert gaussian_binomial(5, 0, 8) == 1
    assert gaussian_binomial(3, 4, 8) == 0


@pytest.mark.parametrize("k,r,fid", [(k, r, f) for f in [(2, 1, 1), (3, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 2)]
                                     for k in range(1, 5) for r in range(0, k + 1)
                                     if gaussian_binomial(k, r, f[0] ** (f[1] * f[2])) <= 6000])
def test_enumeration_counts_and_uniqueness(k, r, fid):
    ctx = ctx_new(*fid)
    seen = set()
    for S in enumerate_subspaces(ctx, k, r):
        assert S.dim == r
        assert span_qn(ctx, S.basis, k).basis == S.basis
        seen.add(S.basis)
    assert len(seen) == gaussian_binomial(k, r, ctx.size)


def test_pattern_counts_sum_to_gaussian_binomial():
    for k in range(1, 7):
        for r in range(k + 1):
            for Q in (2, 3, 4, 8, 9):
                assert sum(pattern_count(p, k, Q) for p in pivot_patterns(k, r)) == gaussian_binomial(k, r, Q)


def test_subspace_at_inverts_stream_order(f8):
    for k, r in [(3, 1), (3, 2), (4, 2)]:
        for idx, S in enumerate(enumerate_subspaces(f8, k, r)):
            if idx % 37 == 0:
                assert subspace_at(f8, k, r, idx) == S
    with pytest.raises(IndexError):
        subspace_at(f8, 2, 1, 9)


@settings(max_examples=50)
@given(st.integers(1, 10 ** 40), st.integers(0, 2 ** 32 - 1))
def test_randbelow_range(n, seed):
    v = randbelow(np.random.default_rng(seed), n)
    assert 0 <= v < n
