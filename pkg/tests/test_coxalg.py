from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from toricdiag.cohom import h0_hirzebruch
from toricdiag.coxalg import (Entry, FreeComplex, Generator, GradedFreeModule, LinearMatrix,
                              RingSpec, check_ddzero, cox_ring, cox_ring_product, direct_sum,
                              evaluate_complex_at_degree, fiber_monomials, graded_basis,
                              monomial_degree_prefix)
from toricdiag.diagonal import build_R
from toricdiag.linalg import scalar_rank
from toricdiag.toric import build_variety, hirzebruch
from toricdiag.warmup import build_pn_warmup


def koszul_p1():
    ring = RingSpec(("x0", "x1"), ((1,), (1,)), (1,))
    terms = (GradedFreeModule((Generator((0,), "1"),)),
             GradedFreeModule((Generator((-1,), "e0"), Generator((-1,), "e1"))),
             GradedFreeModule((Generator((-2,), "e01"),)))
    d1 = LinearMatrix(1, 2, (Entry(0, 0, 1, 0), Entry(0, 1, 1, 1)))
    d2 = LinearMatrix(2, 1, (Entry(0, 0, -1, 1), Entry(1, 0, 1, 0)))
    return FreeComplex(ring, terms, (d1, d2))


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_fiber_monomials_examples(a):
    assert fiber_monomials(a, 1, 0) == [(0, 0, 1, 0), (1, 0, 0, 0)]
    assert fiber_monomials(a, 0, 0) == [(0, 0, 0, 0)]
    ms = fiber_monomials(a, -1, 1)
    assert len(ms) == a
    assert all(m[1] == 1 and m[3] == 0 and m[0] + m[2] == a - 1 for m in ms)


@given(st.integers(0, 4), st.integers(-6, 6), st.integers(-2, 5))
def test_fiber_monomial_count_matches_h0(a, k, l):
    ms = fiber_monomials(a, k, l)
    assert len(ms) == h0_hirzebruch(a, k, l)
    assert ms == sorted(ms)
    for c0, c1, c2, c3 in ms:
        assert c0 - a * c1 + c2 == k and c1 + c3 == l


def test_degree_prefix_examples():
    assert monomial_degree_prefix((1, 0, 0, 0), 0) == (1, 0, -1, 0)
    assert monomial_degree_prefix((0, 1, 0, 0), 3) == (-3, 1, 3, -1)
    assert monomial_degree_prefix((0, 0, 0, 0), 2) == (0, 0, 0, 0)
    assert monomial_degree_prefix({"u0": 2, "u1": 1}, 1) == (1, 1, -1, -1)


def test_degree_prefix_rejects_base_variables():
    with pytest.raises(ValueError):
        monomial_degree_prefix({"u0": 1, "x0": 1}, 1)


@given(st.integers(0, 4), st.tuples(*[st.integers(0, 5)] * 4))
def test_degree_prefix_antisymmetry(a, mono):
    d1, d2, d3, d4 = monomial_degree_prefix(mono, a)
    assert d3 == -d1 and d4 == -d2


def test_graded_basis_linear_forms():
    ring = cox_ring_product(build_variety(1, [0]))
    M = GradedFreeModule((Generator((0, 0, 0, 0), "g"),))
    basis = graded_basis(ring, M, (1, 0, 0, 0))
    assert len(basis) == 2
    names = {ring.variable_names[m.index(1)] for _, m in basis}
    assert names == {"x0", "x1"}
    assert graded_basis(ring, M, (-1, 0, 0, 0)) == []


def test_graded_basis_non_effective_twist():
    ring = cox_ring_product(hirzebruch(1))
    M = GradedFreeModule((Generator((-1, -1, 1, 1), "g"),))
    assert graded_basis(ring, M, (0, 0, 0, 0)) == []


def test_ring_counts_match_enumeration():
    S = cox_ring(hirzebruch(2))
    for k in range(-4, 6):
        for l in range(-1, 4):
            assert S.count((k, l)) == len(S.monomials((k, l))) == h0_hirzebruch(2, k, l)


def test_koszul_strand_dims():
    sc = evaluate_complex_at_degree(koszul_p1(), (2,))
    assert sc.dims == [3, 4, 1]
    assert sc.is_complex()
    assert sc.homology() == [0, 0, 0]
    assert evaluate_complex_at_degree(koszul_p1(), (0,)).homology() == [1, 0, 0]


def test_empty_strand():
    sc = evaluate_complex_at_degree(koszul_p1(), (-5,))
    assert sc.dims == [0, 0, 0]
    assert all(not M.rows for M in sc.matrices)


def test_r_on_f1_degree_zero_strand():
    R = build_R(hirzebruch(1))
    sc = evaluate_complex_at_degree(R.complex, (0, 0, 0, 0))
    assert sc.dims[0] == 1
    live = [g.label for g in R.complex.terms[0].generators
            if R.complex.ring.count(g.degree)]
    assert live == ["|u2u3"]


def test_direct_sum_additivity():
    A = build_pn_warmup(2)
    B = build_pn_warmup(2).twist((1, 0))
    AB = direct_sum(A, B)
    assert check_ddzero(AB)
    for d in [(0, 0), (1, 1), (2, 0), (1, 2)]:
        sa, sb, sab = (evaluate_complex_at_degree(c, d) for c in (A, B, AB))
        assert sab.dims == [x + y for x, y in zip(sa.dims, sb.dims)]
        assert sab.ranks(32003) == [x + y for x, y in zip(sa.ranks(32003), sb.ranks(32003))]


def test_ddzero_holds_and_witness():
    C = build_pn_warmup(2)
    assert check_ddzero(C)
    d2 = C.d(2)
    flipped = replace(d2.entries[0], coeff=-d2.entries[0].coeff)
    bad = FreeComplex(C.ring, C.terms,
                      (C.d(1), LinearMatrix(d2.rows, d2.cols, (flipped,) + d2.entries[1:])))
    res = check_ddzero(bad)
    assert not res
    k, row, col, poly = res.witness
    assert k == 1 and poly


def test_ddzero_zero_complex():
    ring = RingSpec(("t",), ((1,),), (1,))
    assert check_ddzero(FreeComplex(ring, (GradedFreeModule(),), ()))


def test_inhomogeneous_entry_rejected():
    C = koszul_p1()
    bad = LinearMatrix(1, 2, (Entry(0, 0, 1, None), Entry(0, 1, 1, 1)))
    with pytest.raises(ValueError):
        FreeComplex(C.ring, C.terms, (bad, C.d(2))).check_homogeneous()


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        GradedFreeModule((Generator((0,), "g"), Generator((1,), "g")))


@settings(max_examples=30, deadline=None)
@given(st.integers(-2, 3), st.integers(-2, 3))
def test_rational_and_modular_ranks_agree(k, l):
    C = build_pn_warmup(2)
    sc = evaluate_complex_at_degree(C, (k, l))
    for M in sc.matrices:
        assert scalar_rank(M, None) == scalar_rank(M, 32003)
