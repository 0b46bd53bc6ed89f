from fractions import Fraction

from hypothesis import given, settings, strategies as st

from toricdiag.linalg import ScalarMatrix, rank_mod_p, rank_rational, scalar_rank

matrices = st.integers(0, 7).flatmap(
    lambda m: st.integers(0, 7).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                           min_size=m, max_size=m).map(lambda rows: (m, n, rows))))


def _mat(m, n, rows):
    return ScalarMatrix.from_dense(rows) if m else ScalarMatrix(0, n)


def test_identity_and_zero():
    eye = [[int(i == j) for j in range(3)] for i in range(3)]
    assert scalar_rank(eye) == 3 and scalar_rank(eye, 32003) == 3
    assert scalar_rank([[0, 0], [0, 0]]) == 0


def test_warmup_d1_at_point():
    # d_1 of the P^2 warm-up at x = (1, 0, 0), y = (0, 1, 0)
    x, y = (1, 0, 0), (0, 1, 0)
    rows = [[-y[0], -y[1], -y[2], 0, 0, 0],
            [x[0], x[1], x[2], -y[0], -y[1], -y[2]],
            [0, 0, 0, x[0], x[1], x[2]]]
    assert scalar_rank(rows) == 3


def test_fractions():
    assert rank_rational([[Fraction(1, 2), Fraction(1, 3)], [3, 2]]) == 1
    assert rank_mod_p([[Fraction(1, 2), 1]], 7) == 1


def test_rank_drop_mod_p_is_visible():
    assert rank_rational([[7, 0], [0, 1]]) == 2
    assert rank_mod_p([[7, 0], [0, 1]], 7) == 1


@settings(max_examples=300)
@given(matrices)
def test_modular_matches_rational(data):
    m, n, rows = data
    M = _mat(m, n, rows)
    assert rank_mod_p(M, 32003) == rank_rational(M)
    assert rank_rational(M.transpose()) == rank_rational(M)


@given(matrices)
def test_sparse_roundtrip(data):
    m, n, rows = data
    if m:
        assert ScalarMatrix.from_dense(rows).to_dense() == rows
