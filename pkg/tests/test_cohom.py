import pytest
from hypothesis import given, settings, strategies as st

from helpers import grid
from toricdiag.cohom import (SheafSpec, cohomology_dim, cohomology_oracle, cohomology_table,
                             cohomology_vector, h0_hirzebruch, is_acyclic, oracle_vector,
                             projective_space_h, serre_dual, sym_twists, vanishing)
from toricdiag.toric import build_variety, hirzebruch

SMALL = grid(max_dim=3)
twists = st.tuples(st.integers(-7, 7), st.integers(-7, 7))


def test_h0_hirzebruch_examples():
    assert h0_hirzebruch(2, 1, 1) == 6
    assert all(h0_hirzebruch(a, k, -1) == 0 for a in range(4) for k in range(-3, 4))
    assert h0_hirzebruch(3, 0, 1) == 5


def test_projective_space():
    assert projective_space_h(2, 2, 0) == 6
    assert projective_space_h(2, -3, 2) == 1
    assert projective_space_h(2, -4, 2) == 3
    assert projective_space_h(3, -2, 3) == 0
    assert projective_space_h(2, 5, 1) == 0


def test_sym_expansion_small():
    assert dict(sym_twists((2,), 2)) == {0: 1, 2: 1, 4: 1}
    assert dict(sym_twists((0, 1), 1)) == {0: 2, 1: 1}
    assert sym_twists((1,), -1) == ()


def test_structure_sheaf_f1():
    assert cohomology_vector(hirzebruch(1), (0, 0)) == [1, 0, 0]


@pytest.mark.parametrize("a", [1, 2, 3])
def test_middle_band_example(a):
    assert cohomology_vector(hirzebruch(a), (a, -1)) == [0, 0, 0]


def test_f1_h1():
    assert cohomology_dim(hirzebruch(1), (-2, 0), 1) == 1


def test_index_out_of_range():
    with pytest.raises(IndexError):
        cohomology_dim(hirzebruch(1), (0, 0), 3)
    with pytest.raises(IndexError):
        cohomology_oracle(hirzebruch(1), (0, 0), -1)


@pytest.mark.parametrize("k", range(-6, 7))
def test_acyclic_middle_band_f3(k):
    assert is_acyclic(hirzebruch(3), (k, -1))


def test_acyclic_examples():
    assert all(is_acyclic(X, (0, 0)) for X in SMALL)
    X = hirzebruch(2)
    assert not is_acyclic(X, (-2, -2))
    assert serre_dual(X, (-2, -2)) == (2, 0)
    assert cohomology_dim(X, (-2, -2), 2) == 3


def test_oracle_f1_window():
    X = hirzebruch(1)
    for k in range(-5, 6):
        for l in range(-5, 6):
            assert oracle_vector(X, (k, l)) == cohomology_vector(X, (k, l))


def test_oracle_p1xp1_degenerate():
    assert oracle_vector(build_variety(1, [0]), (-1, 0)) == [0, 0, 0]


def test_oracle_f2_dual_twist():
    # dual twist of (0, -3) on F_2 is (0, 1), whose h^0 is 1 + 3
    X = hirzebruch(2)
    assert serre_dual(X, (0, -3)) == (0, 1)
    assert cohomology_oracle(X, (0, -3), 2) == 4
    assert cohomology_dim(X, (0, -3), 2) == 4


def test_oracle_dimension_guard():
    with pytest.raises(ValueError):
        oracle_vector(build_variety(2, [0, 0, 0]), (0, 0))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(SMALL), twists)
def test_oracle_agreement_sampled(X, d):
    assert oracle_vector(X, d) == cohomology_vector(X, d)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(grid()), twists)
def test_serre_duality(X, d):
    v = cohomology_vector(X, d)
    w = cohomology_vector(X, serre_dual(X, d))
    assert v == w[::-1]


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(grid()), twists)
def test_vanishing_matches_dimension(X, d):
    v = cohomology_vector(X, d)
    for i, h in enumerate(v):
        assert vanishing(X, d, i) == (h == 0)
    assert is_acyclic(X, d) == (not any(v[1:]))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(grid()), st.integers(-8, 8), st.data())
def test_middle_band_vanishes(X, k, data):
    l = data.draw(st.integers(-X.s, -1))
    assert cohomology_vector(X, (k, l)) == [0] * (X.dim + 1)


@pytest.mark.parametrize("r, a", [(1, [0]), (1, [2]), (2, [0, 1]), (2, [1, 3])])
def test_equal_rank_merge_case(r, a):
    # r = s: H^r receives both the base-type and fibre-type contributions
    X = build_variety(r, a)
    assert X.r == X.s
    both = False
    for k in range(-8, 9):
        for l in range(-8, 9):
            h = cohomology_dim(X, (k, l), X.r)
            assert vanishing(X, (k, l), X.r) == (h == 0)
            base = k <= -r - 1 and l >= 0
            fibre = l <= -X.s - 1 and k >= X.m
            both |= base or fibre
            assert (h > 0) <= (base or fibre)
    assert both


def test_table_examples():
    X = hirzebruch(1)
    t = cohomology_table(X, SheafSpec.of((0, 0)), ((-1, 1), (-1, 1)))
    assert t.get(0, (0, 0)) == 1
    assert t.get(0, (1, 1)) == 5
    assert t.get(1, (-1, 1)) == cohomology_dim(X, (-1, 1), 1)


def test_table_additivity():
    X = build_variety(1, [0, 2])
    w = ((-3, 3), (-3, 3))
    one = cohomology_table(X, SheafSpec.of((1, 0)), w)
    two = cohomology_table(X, SheafSpec((((1, 0), 2),)), w)
    assert all(two.get(i, d) == 2 * one.get(i, d) for i in range(4) for d in one.degrees())
    empty = cohomology_table(X, SheafSpec(), w)
    assert not empty.entries


def test_sheafspec_merges_and_validates():
    F = SheafSpec((((0, 1), 1), ((0, 1), 2), ((-1, 0), 1)))
    assert F.summands == (((-1, 0), 1), ((0, 1), 3))
    assert F.rank == 4
    assert F.twisted((1, 1)).summands == (((0, 1), 1), ((1, 2), 3))
    with pytest.raises(ValueError):
        SheafSpec((((0, 0), 0),))
