import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scatterlab.equiv import (BY_CRITERION, BY_INDEX, DEFERRED, EQUIVALENT, HypothesisError,
                              WitnessError, _apply, are_equivalent, build_and_verify_witness,
                              build_witness, c_invariants, construct_partner, count_inequivalent,
                              index_verdict, invariant_table, sigma, verify_witness)
from scatterlab.gf import QPowMinus1, ctx_new
from scatterlab.linalg import FqSubspace
from scatterlab.seq import SequenceSpec, generator_vectors, membership_ints

F64 = ctx_new(2, 1, 6)
F4_3 = ctx_new(2, 2, 3)

nonzero64 = st.integers(1, F64.group_order)


@st.composite
def in_range_specs(draw):
    """q=2, n=6, m=3, I=1, J=2: inside J < n/2 and gcd(I, J) = 1."""
    return SequenceSpec(F64, 3, 1, 2, tuple(draw(nonzero64) for _ in range(3)))


# -- index comparison -------------------------------------------------------------------------------


def test_index_verdicts():
    a = SequenceSpec(F64, 3, 1, 2, (1, 1, 2))
    assert index_verdict(a, SequenceSpec(F64, 3, 1, 3, (1, 1, 2))) == BY_INDEX
    assert index_verdict(a, a) == DEFERRED
    f32 = ctx_new(2, 1, 5)
    with pytest.raises(HypothesisError):
        index_verdict(SequenceSpec(f32, 3, 1, 3, (1, 1, 1)), SequenceSpec(f32, 3, 2, 3, (1, 1, 1)))


# -- invariants -------------------------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(in_range_specs())
def test_self_comparison_gives_trivial_C1(A):
    assert c_invariants(A, A, 0)[0] == 1


@settings(max_examples=40, deadline=None)
@given(in_range_specs(), in_range_specs(), st.integers(0, 5))
def test_C_endpoints_match_closed_forms(A, B, e):
    ctx, m, K = F64, 3, 1
    cs = c_invariants(A, B, e)
    c1, cm = 1, 1
    for t in range(m):
        j = (1 + t) % m + 1                     # alpha_2, alpha_3, ..., alpha_1
        c1 = ctx.mul(c1, ctx.frob(ctx.div(B.alpha(j), sigma(ctx, A.alpha(j), e)), t * K))
        cm = ctx.mul(cm, ctx.frob(ctx.div(B.alpha(t + 1), sigma(ctx, A.alpha(j), e)), t * K))
    assert cs[0] == c1 and cs[-1] == cm


def test_out_of_range_pair_is_refused_in_strict_mode(reference):
    with pytest.raises(HypothesisError):
        c_invariants(reference, reference, 0)
    with pytest.raises(HypothesisError):
        are_equivalent(reference, reference)


def test_reference_against_squared_third_alpha(reference, f8):
    g = f8.x
    B = reference.with_alphas((1, 1, f8.pow(g, 2)))
    cs = c_invariants(reference, B, 0, strict=False)
    assert cs[0] == f8.pow(g, 2)
    assert cs[1] == 1
    verdict = are_equivalent(reference, B, strict=False)
    assert verdict.verdict == EQUIVALENT
    assert (verdict.e, verdict.delta) == (0, 2)
    assert not verdict.in_theorem_range and verdict.notes


def test_invariant_table_shape():
    A = SequenceSpec(F4_3, 3, 1, 2, (1, 2, 3))
    B = A.with_alphas((5, 7, 11))
    table = invariant_table(A, B, strict=False)
    assert len(table) == 3 * F4_3.degree
    d = QPowMinus1(F4_3.q, 3)
    for row in table:
        c = F4_3.from_coeffs(row["C"])
        assert row["is_power"] == F4_3.is_power(c, d)


# -- witnesses ----------------------------------------------------------------------------------------


def _image_space(A, B, e, M):
    ctx = A.ctx
    imgs = [_apply(ctx, M, [sigma(ctx, x, e) for x in u]) for u in generator_vectors(A)]
    return FqSubspace.from_vectors(ctx, 2 * A.m, imgs)


def test_self_witness_is_monomial():
    A = SequenceSpec(F64, 3, 1, 2, (3, 17, 40))
    v = are_equivalent(A, A)
    assert v.verdict == EQUIVALENT and (v.e, v.delta) == (0, 1)
    M = build_and_verify_witness(A, A, 0, 1)
    for r in range(6):
        assert sum(1 for x in M[r] if x) == 1


@settings(max_examples=30, deadline=None)
@given(in_range_specs(), st.integers(0, 5), st.integers(1, 3), nonzero64, nonzero64, nonzero64)
def test_constructed_partners_have_verified_witnesses(A, e, delta, xi, o1, o2):
    B = construct_partner(A, e, delta, xi, [o1, o2])
    assert F64.is_power(c_invariants(A, B, e)[delta - 1], QPowMinus1(2, 3))
    M = build_and_verify_witness(A, B, e, delta)
    image = _image_space(A, B, e, M)
    assert image.fp_rank == 18
    for u in image.vectors():
        assert membership_ints(B, u)


def test_frobenius_twisted_partner_is_equivalent():
    A = SequenceSpec(F64, 3, 1, 2, (3, 17, 40))
    B = A.with_alphas([sigma(F64, a, 1) for a in A.alphas])
    v = are_equivalent(A, B)
    assert v.verdict == EQUIVALENT
    assert c_invariants(A, B, 1)[0] == 1


def test_tampered_witness_fails():
    A = SequenceSpec(F64, 3, 1, 2, (3, 17, 40))
    B = construct_partner(A, 2, 2, 9, [5, 6])
    M = build_witness(A, B, 2, 2)
    assert verify_witness(A, B, 2, M) == []
    r, c = next((r, c) for r in range(6) for c in range(6) if M[r][c])
    bad = [row[:] for row in M]
    bad[r][c] = 0
    assert verify_witness(A, B, 2, bad)
    bad = [row[:] for row in M]
    bad[r][c] = F64.mul(M[r][c], F64.x)
    assert verify_witness(A, B, 2, bad)


def test_building_a_witness_without_a_power_fails():
    A = SequenceSpec(F64, 3, 1, 2, (1, 1, 1))
    rng = np.random.default_rng(0)
    while True:
        B = A.with_alphas(tuple(int(x) for x in rng.integers(1, 64, 3)))
        table = invariant_table(A, B)
        if not any(r["is_power"] for r in table):
            break
    with pytest.raises(ValueError):
        build_witness(A, B, 0, 1)
    assert are_equivalent(A, B).verdict == BY_CRITERION
    assert issubclass(WitnessError, RuntimeError)


@settings(max_examples=40, deadline=None)
@given(in_range_specs(), in_range_specs())
def test_verdict_is_symmetric(A, B):
    assert (are_equivalent(A, B).verdict == EQUIVALENT) == (are_equivalent(B, A).verdict == EQUIVALENT)


# -- class counting -------------------------------------------------------------------------------------


def test_count_inequivalent_edges(f8):
    empty = count_inequivalent(f8, 3, 1, 2, 0)
    assert empty["tuples_scanned"] == 0 and empty["classes"] == 0
    one = count_inequivalent(f8, 3, 1, 2, 2)
    assert one["passing"] == 1 and one["classes"] == 1


def test_count_inequivalent_exhaustive_f8(f8):
    rep = count_inequivalent(f8, 3, 1, 2, 10 ** 6)
    assert rep["tuples_scanned"] == 343 and rep["passing"] == 294
    assert rep["classes"] >= rep["bound_ceiling"] == 1
    assert rep["classes"] == 2
    assert not rep["in_theorem_range"] and rep["range_problems"]
