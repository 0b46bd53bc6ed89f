"""Beilinson-type monads B(F) built from the resolution R of the diagonal.

For F a sum of line bundles whose twists F (x) L_1 are all acyclic, slot k of
B(F) is the sum over R_k generators L_1 (x) L_2 of H^0(F (x) L_1) (x) L_2, and
the differential is induced from R: first-factor variables act on H^0 bases
(giving constants), second-factor variables survive as ring entries.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .cohom import SheafSpec, cohomology_dim, is_acyclic, vanishing
from .coxalg import (Entry, FreeComplex, Generator, GradedFreeModule, LinearMatrix,
                     box, check_ddzero, cokernel_dim, cox_ring, graded_dim)
from .diagonal import DiagonalResolution, ExactnessReport, build_R, verify_exactness
from .linalg import DEFAULT_PRIME
from .reduction import poly_homology, reduce_units
from .toric import ToricVariety


class NonAcyclicTwist(ValueError):
    """Some F (x) L_1 has higher cohomology; ``offenders`` lists (L_1, twist, i)."""

    def __init__(self, offenders):
        self.offenders = list(offenders)
        head = ", ".join(f"L1={l1} F-twist={tw} H^{i}" for l1, tw, i in self.offenders[:5])
        more = "" if len(self.offenders) <= 5 else f" (+{len(self.offenders) - 5} more)"
        super().__init__(f"non-acyclic twists: {head}{more}")


def _first(g: Generator):
    return g.degree[:2]


def _second(g: Generator):
    return g.degree[2:]


def _plus(u, v):
    return (u[0] + v[0], u[1] + v[1])


def format_monomial(names, mono) -> str:
    parts = []
    for n, e in zip(names, mono):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "".join(parts) or "1"


# -- first page ---------------------------------------------------------------

@dataclass
class E1Page:
    """entries[(i, j)] = Counter of L_2 twists, each with its multiplicity."""
    entries: dict = field(default_factory=dict)

    def dim(self, i: int, j: int) -> int:
        return sum(self.entries.get((i, j), Counter()).values())

    def module(self, i: int, j: int) -> GradedFreeModule:
        cnt = self.entries.get((i, j), Counter())
        gens = []
        for tw in sorted(cnt):
            for c in range(cnt[tw]):
                gens.append(Generator(tuple(tw), f"{tw[0]},{tw[1]}#{c}"))
        return GradedFreeModule(tuple(gens))

    def nonzero(self):
        return sorted(k for k, v in self.entries.items() if sum(v.values()))

    def band(self, k: int) -> int:
        """Total dimension of the terms with i - j = k."""
        return sum(self.dim(i, j) for i, j in self.nonzero() if i - j == k)

    def __eq__(self, other):
        if not isinstance(other, E1Page):
            return NotImplemented
        keys = set(self.nonzero()) | set(other.nonzero())
        return all(+self.entries.get(k, Counter()) == +other.entries.get(k, Counter())
                   for k in keys)


def e1_terms(X: ToricVariety, F: SheafSpec, R: DiagonalResolution | None = None) -> E1Page:
    R = R or build_R(X)
    page = E1Page()
    for i, term in enumerate(R.complex.terms):
        for g in term.generators:
            l1, l2 = _first(g), _second(g)
            for tw, mult in F.summands:
                vec = [cohomology_dim(X, _plus(tw, l1), j) for j in range(X.dim + 1)]
                for j, h in enumerate(vec):
                    if h:
                        page.entries.setdefault((i, j), Counter())[l2] += mult * h
    return page


def non_acyclic_twists(X: ToricVariety, F: SheafSpec, R: DiagonalResolution | None = None):
    """(L_1, F-summand twist, i) for every nonvanishing H^i, i > 0."""
    R = R or build_R(X)
    seen = set()
    out = []
    for term in R.complex.terms:
        for g in term.generators:
            l1 = _first(g)
            for tw, _ in F.summands:
                d = _plus(tw, l1)
                if (l1, tw) in seen or is_acyclic(X, d):
                    continue
                seen.add((l1, tw))
                for i in range(1, X.dim + 1):
                    if not vanishing(X, d, i):
                        out.append((l1, tw, i))
    return out


# -- the monad ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Monad:
    X: ToricVariety
    F: SheafSpec
    complex: FreeComplex
    provenance: tuple   # per slot: ((R-label, summand twist, copy, z), ...)

    def ranks(self):
        return self.complex.ranks()


def _key_label(rlabel, tw, copy, names, z):
    return f"{rlabel}@{tw[0]},{tw[1]}#{copy}:{format_monomial(names, z)}"


def build_monad(X: ToricVariety, F: SheafSpec, R: DiagonalResolution | None = None) -> Monad:
    R = R or build_R(X)
    bad = non_acyclic_twists(X, F, R)
    if bad:
        raise NonAcyclicTwist(bad)
    S = cox_ring(X)
    ring = cox_ring(X, primed=True)
    names = S.variable_names
    nX = S.ngens
    rc = R.complex

    terms, prov, index = [], [], []
    for term in rc.terms:
        gens, tags, idx = [], [], {}
        for gi, g in enumerate(term.generators):
            for si, (tw, mult) in enumerate(F.summands):
                basis = S.monomials(_plus(tw, _first(g)))
                for c in range(mult):
                    for z in basis:
                        idx[(gi, si, c, z)] = len(gens)
                        gens.append(Generator(_second(g), _key_label(g.label, tw, c, names, z)))
                        tags.append((g.label, tw, c, format_monomial(names, z)))
        terms.append(GradedFreeModule(tuple(gens)))
        prov.append(tuple(tags))
        index.append(idx)

    diffs = []
    for k in range(1, len(rc.terms)):
        ents = []
        src_terms = rc.terms[k]
        for e in rc.d(k).entries:
            g = src_terms.generators[e.col]
            for si, (tw, mult) in enumerate(F.summands):
                basis = S.monomials(_plus(tw, _first(g)))
                for c in range(mult):
                    for z in basis:
                        col = index[k][(e.col, si, c, z)]
                        if e.var < nX:
                            z2 = z[:e.var] + (z[e.var] + 1,) + z[e.var + 1:]
                            ents.append(Entry(index[k - 1][(e.row, si, c, z2)], col, e.coeff, None))
                        else:
                            ents.append(Entry(index[k - 1][(e.row, si, c, z)], col, e.coeff,
                                              e.var - nX))
        diffs.append(LinearMatrix(terms[k - 1].rank, terms[k].rank, tuple(ents)))
    cx = FreeComplex(ring, tuple(terms), tuple(diffs))
    cx.check_homogeneous()
    return Monad(X, F, cx, tuple(prov))


def distinguished_label(X: ToricVariety, b: int, c: int) -> str:
    """Slot-0 generator H^0(O) (x) O(b, c) of B(O(b, c))."""
    from .coxalg import format_fiber_monomial
    m = (b + c * X.a_s, c, X.r - b, X.s - c)
    names = cox_ring(X).variable_names
    return _key_label(f"|{format_fiber_monomial(m)}", (b, c), 0, names, (0,) * len(names))


# -- verification of B(O(b, c)) ~ O(b, c) ------------------------------------

@dataclass
class StructuralReport:
    bad_columns: list = field(default_factory=list)        # (col, constants found)
    constant_free_rows: list = field(default_factory=list)  # labels
    expected_row: str = ""

    @property
    def ok(self) -> bool:
        return not self.bad_columns and self.constant_free_rows == [self.expected_row]


def structural_check(monad: Monad, b: int, c: int) -> StructuralReport:
    cx = monad.complex
    rep = StructuralReport(expected_row=distinguished_label(monad.X, b, c))
    if not cx.diffs:
        rep.constant_free_rows = [g.label for g in cx.terms[0].generators]
        return rep
    d1 = cx.d(1)
    hit = set()
    for col, ents in sorted(d1.by_column().items()):
        consts = [e for e in ents if e.var is None]
        hit.update(e.row for e in consts)
        if len(consts) != 1 or consts[0].coeff not in (1, -1):
            rep.bad_columns.append((col, [(e.row, e.coeff) for e in consts]))
    for col in range(d1.cols):
        if col not in d1.by_column():
            rep.bad_columns.append((col, []))
    rep.constant_free_rows = [g.label for i, g in enumerate(cx.terms[0].generators)
                              if i not in hit]
    return rep


def monad_window(cx: FreeComplex, margin: int = 2):
    degs = [g.degree for t in cx.terms for g in t.generators]
    if not degs:
        return ((0, 0), (-1, -1))
    lo = tuple(min(d[t] for d in degs) - margin for t in range(2))
    hi = tuple(max(d[t] for d in degs) + margin for t in range(2))
    return lo, hi


def expected_cokernel(ring, target: SheafSpec, d) -> int:
    return sum(mult * ring.count(_plus(d, tw)) for tw, mult in target.summands)


def cokernel_mismatches(cx: FreeComplex, target: SheafSpec, window, prime=DEFAULT_PRIME,
                        known: dict | None = None, skip=frozenset()):
    """Degrees where dim coker d_1 differs from the free module on ``target``."""
    bad = []
    lo, hi = window
    for d in box(lo, hi):
        d = tuple(d)
        if d in skip:
            continue
        want = expected_cokernel(cx.ring, target, d)
        got = known[d] if known and d in known else cokernel_dim(cx, d, prime)
        if got != want:
            bad.append((d, got, want))
    return bad


def check_free_complex(cx: FreeComplex, target: SheafSpec, window=None, prime=DEFAULT_PRIME,
                       reduce: bool = True, cokernel: dict | None = None,
                       max_strand: int | None = None):
    """Exactness in positive degrees plus coker d_1 against ``target``, one pass.

    With ``reduce`` the unit entries are cancelled first; the homology of
    every strand is unchanged, only the matrices shrink.  Strands of the
    reduced complex with more than ``max_strand`` basis elements are skipped
    and listed in the report, and their cokernel is not compared.
    """
    window = window or monad_window(cx)
    coker: dict = {} if cokernel is None else cokernel
    if not reduce:
        rep = verify_exactness(cx, window, prime, cokernel=coker, max_strand=max_strand)
        return rep, cokernel_mismatches(cx, target, window, prime, coker,
                                        skip={d for d, _ in rep.skipped})
    pc = reduce_units(cx, prime)
    rep = ExactnessReport()
    lo, hi = window
    for d in box(lo, hi):
        d = tuple(d)
        rep.checked += 1
        dims = [graded_dim(pc.ring, t, d) for t in pc.terms]
        if not any(dims):
            coker[d] = 0
            continue
        rep.nonzero += 1
        if max_strand is not None and sum(dims) > max_strand:
            rep.skipped.append((d, sum(dims)))
            continue
        h = poly_homology(pc, d)
        coker[d] = h[0]
        for k in range(1, len(h)):
            if h[k]:
                rep.failures.append((d, k, h[k]))
    return rep, cokernel_mismatches(cx, target, window, prime, coker,
                                    skip={d for d, _ in rep.skipped})


@dataclass
class MonadReport:
    b: int
    c: int
    concentrated: bool
    ddzero: bool
    exactness: ExactnessReport
    structure: StructuralReport
    coker_mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.concentrated and self.ddzero and self.exactness.ok
                and self.structure.ok and not self.coker_mismatches)

    def __bool__(self):
        return self.ok


def verify_monad(monad: Monad, b: int, c: int, window=None, prime=DEFAULT_PRIME,
                 page: E1Page | None = None, reduce: bool = True) -> MonadReport:
    X = monad.X
    page = page or e1_terms(X, monad.F)
    concentrated = all(j == 0 for _, j in page.nonzero())
    exact, coker = check_free_complex(monad.complex, SheafSpec.of((b, c)), window, prime, reduce)
    return MonadReport(b, c, concentrated, bool(check_ddzero(monad.complex)), exact,
                       structural_check(monad, b, c), coker)


def verify_monad_identity(X: ToricVariety, b: int, c: int, R: DiagonalResolution | None = None,
                          window=None, prime=DEFAULT_PRIME, reduce: bool = True) -> MonadReport:
    if not (0 <= b <= X.r and 0 <= c <= X.s):
        raise ValueError(f"(b, c) = ({b}, {c}) outside [0, {X.r}] x [0, {X.s}]")
    R = R or build_R(X)
    F = SheafSpec.of((b, c))
    return verify_monad(build_monad(X, F, R), b, c, window, prime, e1_terms(X, F, R), reduce)


def acyclic_degrees(X: ToricVariety, cx: FreeComplex, window):
    """Degrees d of ``window`` at which every term S(e) of ``cx`` has O(e + d) acyclic.

    There the global-section complex of the sheafified complex is exact, so
    coker d_1 in degree d equals H^0 of the sheaf it presents.
    """
    twists = {g.degree for t in cx.terms for g in t.generators}
    lo, hi = window
    return [tuple(d) for d in box(lo, hi)
            if all(is_acyclic(X, _plus(tuple(d), e)) for e in twists)]


def sheaf_cokernel_mismatches(X: ToricVariety, cx: FreeComplex, target: SheafSpec,
                              window=None, prime=DEFAULT_PRIME, known: dict | None = None):
    """Like :func:`cokernel_mismatches`, restricted to :func:`acyclic_degrees`."""
    window = window or monad_window(cx)
    bad = []
    for d in acyclic_degrees(X, cx, window):
        if known is not None and d not in known:
            continue
        want = expected_cokernel(cx.ring, target, d)
        got = known[d] if known and d in known else cokernel_dim(cx, d, prime)
        if got != want:
            bad.append((d, got, want))
    return bad
