import re

import pytest

from toricdiag.cohom import SheafSpec, cohomology_dim
from toricdiag.coxalg import FreeComplex, LinearMatrix, check_ddzero, format_fiber_monomial
from toricdiag.diagonal import RLabel, build_R
from toricdiag.monad import (E1Page, Monad, NonAcyclicTwist, acyclic_degrees, build_monad,
                             check_free_complex, distinguished_label, e1_terms, format_monomial,
                             non_acyclic_twists, sheaf_cokernel_mismatches, structural_check,
                             verify_monad, verify_monad_identity)
from toricdiag.toric import build_variety, hirzebruch

SMALL = [build_variety(1, [0]), hirzebruch(1), hirzebruch(2), hirzebruch(3),
         build_variety(2, [0]), build_variety(2, [1]), build_variety(1, [0, 1])]


@pytest.mark.parametrize("X", SMALL, ids=lambda X: X.name)
def test_e1_concentrated_on_nef_box(X):
    for b in range(X.r + 1):
        for c in range(X.s + 1):
            page = e1_terms(X, SheafSpec.of((b, c)))
            assert all(j == 0 for _, j in page.nonzero())


@pytest.mark.parametrize("a", [1, 2, 3])
def test_e1_counterexample_band(a):
    page = e1_terms(hirzebruch(a), SheafSpec.of((a, -1)))
    assert page.band(1) > 0


def test_e1_empty_sheaf():
    page = e1_terms(hirzebruch(1), SheafSpec())
    assert page.nonzero() == [] and page == E1Page()


def test_e1_counts_from_table():
    X = hirzebruch(2)
    R = build_R(X)
    F = SheafSpec((((1, 0), 2), ((-3, 1), 1)))
    page = e1_terms(X, F, R)
    for i, term in enumerate(R.complex.terms):
        for j in range(X.dim + 1):
            want = sum(mult * cohomology_dim(X, (tw[0] + g.degree[0], tw[1] + g.degree[1]), j)
                       for g in term.generators for tw, mult in F.summands)
            assert page.dim(i, j) == want
            assert page.module(i, j).rank == want


def test_e1_depends_on_table_only():
    X = hirzebruch(1)
    A = e1_terms(X, SheafSpec((((0, 1), 1), ((0, 1), 1), ((1, 0), 1))))
    B = e1_terms(X, SheafSpec((((1, 0), 1), ((0, 1), 2))))
    assert A == B


def _parse(names, text):
    exps = dict.fromkeys(names, 0)
    for var, e in re.findall(r"([xy]\d+)(?:\^(\d+))?", text):
        exps[var] += int(e or 1)
    return tuple(exps[n] for n in names)


def test_monad_column_shape():
    # column (alpha_i m, z): 1 at (u2 m, x_i z) and -x_i' at (u0 m, z)
    X = hirzebruch(1)
    M = build_monad(X, SheafSpec.of((1, 1)))
    cx = M.complex
    base = ("x0", "x1", "y0", "y1")
    rows = {g.label: i for i, g in enumerate(cx.terms[0].generators)}
    checked = 0
    for col, g in enumerate(cx.terms[1].generators):
        rlabel, rest = g.label.split("@")
        lab = RLabel.parse(rlabel)
        if lab.J:
            continue
        (i,) = lab.I
        z = _parse(base, rest.split(":")[1])
        zx = z[:i] + (z[i] + 1,) + z[i + 1:]
        up2 = lab.m[:2] + (lab.m[2] + 1, lab.m[3])
        up0 = (lab.m[0] + 1,) + lab.m[1:]
        r1 = f"|{format_fiber_monomial(up2)}@1,1#0:{format_monomial(base, zx)}"
        r2 = f"|{format_fiber_monomial(up0)}@1,1#0:{format_monomial(base, z)}"
        ents = {(e.row, e.var, e.coeff) for e in cx.d(1).entries if e.col == col}
        assert ents == {(rows[r1], None, 1), (rows[r2], i, -1)}
        assert cx.ring.variable_names[i] == f"x{i}'"
        checked += 1
    assert checked > 0


def test_distinguished_summand_p1xp1():
    X = build_variety(1, [0])
    M = build_monad(X, SheafSpec.of((0, 0)))
    labels = [g.label for g in M.complex.terms[0].generators]
    assert distinguished_label(X, 0, 0) in labels
    assert distinguished_label(X, 0, 0).startswith("|u2u3@")


@pytest.mark.parametrize("r, a", [(2, [1]), (1, [0, 2]), (3, [0])])
def test_distinguished_at_origin(r, a):
    X = build_variety(r, a)
    m = format_fiber_monomial((0, 0, r, len(a)))
    assert distinguished_label(X, 0, 0).startswith(f"|{m}@0,0#0:")


@pytest.mark.parametrize("a", [1, 2, 3])
def test_non_acyclic_input_rejected(a):
    X = hirzebruch(a)
    F = SheafSpec.of((a, -1))
    offenders = non_acyclic_twists(X, F)
    assert offenders
    with pytest.raises(NonAcyclicTwist) as exc:
        build_monad(X, F)
    assert exc.value.offenders == offenders


@pytest.mark.parametrize("X", SMALL, ids=lambda X: X.name)
def test_monad_identity_small(X):
    R = build_R(X)
    for b in range(X.r + 1):
        for c in range(X.s + 1):
            rep = verify_monad_identity(X, b, c, R)
            assert rep.ok, (b, c, rep)


def test_monad_identity_unreduced_agrees():
    X = hirzebruch(2)
    for b, c in [(0, 0), (1, 1)]:
        a = verify_monad_identity(X, b, c, reduce=True)
        u = verify_monad_identity(X, b, c, reduce=False)
        assert a.ok and u.ok
        assert a.exactness.checked == u.exactness.checked


def test_identity_outside_box_rejected():
    with pytest.raises(ValueError):
        verify_monad_identity(hirzebruch(1), 2, 0)


def test_perturbed_monad_fails_structure():
    X = hirzebruch(1)
    M = build_monad(X, SheafSpec.of((1, 0)))
    cx = M.complex
    d1 = cx.d(1)
    drop = next(k for k, e in enumerate(d1.entries) if e.var is None)
    ents = d1.entries[:drop] + d1.entries[drop + 1:]
    broken = FreeComplex(cx.ring, cx.terms, (LinearMatrix(d1.rows, d1.cols, ents),) + cx.diffs[1:])
    bad = Monad(X, M.F, broken, M.provenance)
    assert not structural_check(bad, 1, 0).ok
    assert not verify_monad(bad, 1, 0).ok


@pytest.mark.parametrize("X", SMALL[:4], ids=lambda X: X.name)
def test_monad_slots_match_e1(X):
    R = build_R(X)
    F = SheafSpec((((0, 0), 1), ((1, 1), 2)))
    M = build_monad(X, F, R)
    page = e1_terms(X, F, R)
    assert check_ddzero(M.complex)
    assert M.ranks() == [page.dim(i, 0) for i in range(X.dim + 1)]
    assert all(e.var is None or e.coeff in (1, -1) for D in M.complex.diffs for e in D.entries)


def test_sheaf_level_cokernel():
    # B(O(4, 0)) presents O(4, 0) as a sheaf, not as a module
    X = build_variety(1, [0])
    F = SheafSpec.of((4, 0))
    M = build_monad(X, F)
    coker: dict = {}
    rep, bad = check_free_complex(M.complex, F, cokernel=coker)
    assert rep.ok
    assert ((-2, 0), 0, 3) in bad
    degs = acyclic_degrees(X, M.complex, ((-2, -2), (2, 2)))
    assert (-2, 0) not in degs and (0, 0) in degs
    assert not sheaf_cokernel_mismatches(X, M.complex, F, known=coker)
