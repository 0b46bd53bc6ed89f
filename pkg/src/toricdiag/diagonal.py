"""The linear resolution R of the diagonal on X x X.

R is the part of the Koszul complex on alpha_0..alpha_r, beta_0..beta_s
(twisted by (0,0,0,0,r,s)) lying in fiber degree (0, 0).  Its generators in
slot n are indexed by (I, J, m): an exterior monomial alpha_I beta_J with
|I| + |J| = n together with a fiber monomial m in M_{r-|I|, s-|J|}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .cohom import h0_hirzebruch
from .coxalg import (Entry, FreeComplex, Generator, GradedFreeModule,
                     LinearMatrix, box, cox_ring_product, evaluate_complex_at_degree, graded_dim,
                     fiber_monomials, format_fiber_monomial, monomial_degree_prefix,
                     parse_fiber_monomial)
from .linalg import DEFAULT_PRIME, SMALL_STRAND, scalar_rank
from .toric import ToricVariety


@dataclass(frozen=True)
class RLabel:
    I: tuple[int, ...]
    J: tuple[int, ...]
    m: tuple[int, int, int, int]

    def __str__(self):
        ext = ".".join([f"a{i}" for i in self.I] + [f"b{j}" for j in self.J])
        return f"{ext}|{format_fiber_monomial(self.m)}"

    @classmethod
    def parse(cls, text: str) -> "RLabel":
        ext, mono = text.split("|")
        I, J = [], []
        for tok in filter(None, ext.split(".")):
            (I if tok[0] == "a" else J).append(int(tok[1:]))
        return cls(tuple(I), tuple(J), parse_fiber_monomial(mono))


@dataclass(frozen=True, eq=False)
class DiagonalResolution:
    X: ToricVariety
    complex: FreeComplex
    labels: tuple[tuple[RLabel, ...], ...]

    def first_factor_twists(self, n: int) -> list[tuple[int, int]]:
        return [g.degree[:2] for g in self.complex.terms[n].generators]

    def split_twists(self, n: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """(L_1, L_2) for each generator L_1 x L_2 of slot n."""
        return [(g.degree[:2], g.degree[2:]) for g in self.complex.terms[n].generators]

    def ranks(self) -> list[int]:
        return self.complex.ranks()


def exterior_monomials(r: int, s: int, n: int):
    """(I, J) with |I| + |J| = n, ordered alpha_0 < ... < alpha_r < beta_0 < ... < beta_s."""
    letters = [("a", i) for i in range(r + 1)] + [("b", j) for j in range(s + 1)]
    for w in combinations(letters, n):
        yield (tuple(i for t, i in w if t == "a"), tuple(j for t, j in w if t == "b"))


def generator_twist(X: ToricVariety, lab: RLabel) -> tuple[int, int, int, int]:
    d1, d2, _, _ = monomial_degree_prefix(lab.m, X.a_s)
    return (-len(lab.I) - d1 + sum(X.data.twist(j) for j in lab.J),
            -len(lab.J) - d2, d1, d2)


def _mul(m, u):
    return tuple(a + b for a, b in zip(m, u))


def build_R(X: ToricVariety) -> DiagonalResolution:
    r, s, a_s = X.r, X.s, X.a_s
    ring = cox_ring_product(X)
    nX = r + s + 2
    x = list(range(r + 1))
    y = list(range(r + 1, nX))
    xp = [nX + i for i in x]
    yp = [nX + j for j in y]
    U0, U1, U2, U3 = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)

    labels: list[list[RLabel]] = []
    for n in range(r + s + 1):
        slot = []
        for I, J in exterior_monomials(r, s, n):
            for m in fiber_monomials(a_s, r - len(I), s - len(J)):
                slot.append(RLabel(I, J, m))
        labels.append(slot)
    index = [{lab: j for j, lab in enumerate(slot)} for slot in labels]
    terms = tuple(GradedFreeModule(tuple(Generator(generator_twist(X, lab), str(lab))
                                         for lab in slot))
                  for slot in labels)

    diffs = []
    for n in range(1, r + s + 1):
        entries = []
        tgt = index[n - 1]
        for col, lab in enumerate(labels[n]):
            w = [("a", i) for i in lab.I] + [("b", j) for j in lab.J]
            for t, (kind, i) in enumerate(w):
                sign = -1 if t % 2 else 1
                if kind == "a":
                    I2 = tuple(v for v in lab.I if v != i)
                    moves = ((x[i], sign, _mul(lab.m, U2)),
                             (xp[i], -sign, _mul(lab.m, U0)))
                    J2 = lab.J
                else:
                    J2 = tuple(v for v in lab.J if v != i)
                    ai = X.data.twist(i)
                    mono = (a_s - ai, 1, ai, 0)
                    moves = ((y[i], sign, _mul(lab.m, U3)),
                             (yp[i], -sign, _mul(lab.m, mono)))
                    I2 = lab.I
                for var, c, m2 in moves:
                    row = tgt.get(RLabel(I2, J2, m2))
                    # target monomial always lies in the required M set
                    assert row is not None, (lab, kind, i, m2)
                    entries.append(Entry(row, col, c, var))
        diffs.append(LinearMatrix(len(labels[n - 1]), len(labels[n]), tuple(entries)))
    cx = FreeComplex(ring, terms, tuple(diffs))
    cx.check_homogeneous()
    return DiagonalResolution(X, cx, tuple(tuple(s) for s in labels))


def rank_formula(X: ToricVariety, n: int) -> int:
    if not 0 <= n <= X.dim:
        raise IndexError(f"slot {n} outside 0..{X.dim}")
    return comb(X.dim, n) * h0_hirzebruch(X.a_s, X.r, X.s)


# -- exactness on strands -----------------------------------------------------

@dataclass
class ExactnessReport:
    checked: int = 0
    nonzero: int = 0
    failures: list = field(default_factory=list)   # (degree, slot, homology dim)
    rank_drops: list = field(default_factory=list)  # (degree, slot, rank_p, rank_Q)
    skipped: list = field(default_factory=list)     # (degree, strand dim) over budget

    @property
    def complete(self) -> bool:
        return not self.skipped

    @property
    def ok(self) -> bool:
        """No failures, and every strand in the window was actually checked."""
        return not self.failures and not self.rank_drops and not self.skipped

    def __bool__(self):
        return self.ok

    def merge(self, other: "ExactnessReport") -> "ExactnessReport":
        return ExactnessReport(self.checked + other.checked, self.nonzero + other.nonzero,
                               self.failures + other.failures,
                               self.rank_drops + other.rank_drops,
                               self.skipped + other.skipped)


def default_window(c: FreeComplex, margin: int = 2):
    """Smallest box containing every generator degree (twist vector), padded."""
    degs = [g.degree for term in c.terms for g in term.generators]
    if not degs:
        return ((), ())
    g = len(degs[0])
    lo = tuple(min(d[t] for d in degs) - margin for t in range(g))
    hi = tuple(max(d[t] for d in degs) + margin for t in range(g))
    return lo, hi


def strand_dims(c: FreeComplex, d) -> list[int]:
    return [graded_dim(c.ring, t, d) for t in c.terms]


def check_strand_exactness(c: FreeComplex, degrees, prime: int | None = DEFAULT_PRIME,
                           cross_check: bool = False, max_strand: int | None = None,
                           cokernel: dict | None = None) -> ExactnessReport:
    """rank d_k + rank d_{k+1} = dim slot k for k >= 1 in each given degree.

    Strands whose total dimension exceeds ``max_strand`` are recorded as
    skipped.  If ``cokernel`` is a dict it receives dim coker d_1 per degree.
    """
    rep = ExactnessReport()
    n = len(c.terms)
    for d in degrees:
        d = tuple(d)
        rep.checked += 1
        dims = strand_dims(c, d)
        if not any(dims[1:]):
            if cokernel is not None:
                cokernel[d] = dims[0]
            continue
        rep.nonzero += 1
        if max_strand is not None and sum(dims) > max_strand:
            rep.skipped.append((d, sum(dims)))
            continue
        sc = evaluate_complex_at_degree(c, d)
        ranks = [0] + [scalar_rank(M, prime) if M.rows else 0 for M in sc.matrices] + [0]
        if cokernel is not None:
            cokernel[d] = dims[0] - ranks[1]
        for k in range(1, n):
            h = dims[k] - ranks[k] - ranks[k + 1]
            if h:
                rep.failures.append((d, k, h))
        if cross_check and prime is not None and sum(dims) <= SMALL_STRAND:
            for k, M in enumerate(sc.matrices, start=1):
                rq = scalar_rank(M, None) if M.rows else 0
                if rq != ranks[k]:
                    rep.rank_drops.append((d, k, ranks[k], rq))
    return rep


def verify_exactness(R, window=None, prime: int | None = DEFAULT_PRIME,
                     cross_check: bool = False, max_strand: int | None = None,
                     cokernel: dict | None = None) -> ExactnessReport:
    """Strand-wise exactness of R (or any FreeComplex) in positive homological degrees.

    ``window`` is a pair (lo, hi) of inclusive corners; None means the default
    window, and an empty box is a vacuous pass.
    """
    c = R.complex if isinstance(R, DiagonalResolution) else R
    if window is None:
        window = default_window(c)
    lo, hi = window
    if any(a > b for a, b in zip(lo, hi)):
        return ExactnessReport()
    return check_strand_exactness(c, box(lo, hi), prime, cross_check, max_strand, cokernel)


def window_size(R, window=None) -> tuple[int, int]:
    """(total dimension of all strands in the window, largest strand)."""
    c = R.complex if isinstance(R, DiagonalResolution) else R
    lo, hi = window if window is not None else default_window(c)
    tot = big = 0
    for d in box(lo, hi):
        t = sum(strand_dims(c, d))
        tot += t
        big = max(big, t)
    return tot, big
