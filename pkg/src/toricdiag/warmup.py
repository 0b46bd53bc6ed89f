"""Resolution of the diagonal on P^n x P^n, two ways.

``build_pn_warmup`` restricts the Koszul complex on alpha_i = u1*x_i - u0*y_i
(over the P^1-bundle E -> P^n x P^n, twisted by (0,0,n)) to u-degree 0.
``build_eagon_northcott`` forms the type C^n Eagon-Northcott complex
Sym^{n-i}(G) (x) Lambda^i(F) of the two-term complex G <- F given by the
canonical section, directly from its matrix.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .coxalg import (Entry, FreeComplex, Generator, GradedFreeModule, LinearMatrix,
                     RingSpec, cokernel_dim, box)
from .diagonal import ExactnessReport, default_window, verify_exactness
from .linalg import DEFAULT_PRIME


@lru_cache(maxsize=None)
def pn_ring(n: int) -> RingSpec:
    names = tuple([f"x{i}" for i in range(n + 1)] + [f"y{i}" for i in range(n + 1)])
    degs = tuple([(1, 0)] * (n + 1) + [(0, 1)] * (n + 1))
    return RingSpec(names, degs, (1, 1))


def _u_label(p: int, q: int) -> str:
    parts = []
    for name, e in (("u0", p), ("u1", q)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "".join(parts) or "1"


def _alpha_label(I) -> str:
    return ".".join(f"a{i}" for i in I)


def build_pn_warmup(n: int) -> FreeComplex:
    if n < 1:
        raise ValueError("n must be >= 1")
    ring = pn_ring(n)
    x = list(range(n + 1))
    y = [n + 1 + i for i in range(n + 1)]
    slots = []
    for i in range(n + 1):
        slot = []
        for I in combinations(range(n + 1), i):
            for p in range(n - i, -1, -1):
                slot.append((I, p, n - i - p))
        slots.append(slot)
    index = [{key: j for j, key in enumerate(slot)} for slot in slots]
    terms = tuple(
        GradedFreeModule(tuple(Generator((-len(I) - p, p), f"{_alpha_label(I)}|{_u_label(p, q)}")
                               for I, p, q in slot))
        for slot in slots)
    diffs = []
    for i in range(1, n + 1):
        ents = []
        for col, (I, p, q) in enumerate(slots[i]):
            for t, j in enumerate(I):
                sign = -1 if t % 2 else 1
                I2 = I[:t] + I[t + 1:]
                ents.append(Entry(index[i - 1][(I2, p, q + 1)], col, sign, x[j]))
                ents.append(Entry(index[i - 1][(I2, p + 1, q)], col, -sign, y[j]))
        diffs.append(LinearMatrix(len(slots[i - 1]), len(slots[i]), tuple(ents)))
    cx = FreeComplex(ring, terms, tuple(diffs))
    cx.check_homogeneous()
    return cx


def section_complex(n: int) -> FreeComplex:
    """S(-1,1) + S  <--  S(-1,0)^{n+1}, with rows (-y_0 .. -y_n) and (x_0 .. x_n)."""
    ring = pn_ring(n)
    C0 = GradedFreeModule((Generator((-1, 1), "g0"), Generator((0, 0), "g1")))
    C1 = GradedFreeModule(tuple(Generator((-1, 0), f"f{i}") for i in range(n + 1)))
    ents = []
    for i in range(n + 1):
        ents.append(Entry(0, i, -1, n + 1 + i))
        ents.append(Entry(1, i, 1, i))
    cx = FreeComplex(ring, (C0, C1), (LinearMatrix(2, n + 1, tuple(ents)),))
    cx.check_homogeneous()
    return cx


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def eagon_northcott(C: FreeComplex, n: int) -> FreeComplex:
    """Sym^{n-i}(C_0) (x) Lambda^i(C_1) in homological degree i, Koszul differential."""
    G, F = C.terms
    phi = C.d(1)
    cols = phi.by_column()
    g, f = G.rank, F.rank
    slots = []
    for i in range(n + 1):
        slots.append([(a, J) for J in combinations(range(f), i)
                      for a in _compositions(n - i, g)])
    index = [{key: j for j, key in enumerate(slot)} for slot in slots]

    def twist(a, J):
        tw = [0] * C.ring.rank
        for k, e in enumerate(a):
            for t in range(len(tw)):
                tw[t] += e * G.generators[k].degree[t]
        for j in J:
            for t in range(len(tw)):
                tw[t] += F.generators[j].degree[t]
        return tuple(tw)

    def label(a, J):
        sym = "".join(f"{G.generators[k].label}^{e}" if e > 1 else G.generators[k].label
                      for k, e in enumerate(a) if e) or "1"
        ext = "^".join(F.generators[j].label for j in J) or "1"
        return f"{sym}*{ext}"

    terms = tuple(GradedFreeModule(tuple(Generator(twist(a, J), label(a, J)) for a, J in slot))
                  for slot in slots)
    diffs = []
    for i in range(1, n + 1):
        ents = []
        for col, (a, J) in enumerate(slots[i]):
            for t, j in enumerate(J):
                sign = -1 if t % 2 else 1
                J2 = J[:t] + J[t + 1:]
                for e in cols.get(j, ()):
                    a2 = tuple(v + (1 if k == e.row else 0) for k, v in enumerate(a))
                    ents.append(Entry(index[i - 1][(a2, J2)], col, sign * e.coeff, e.var))
        diffs.append(LinearMatrix(len(slots[i - 1]), len(slots[i]), tuple(ents)))
    cx = FreeComplex(C.ring, terms, tuple(diffs))
    cx.check_homogeneous()
    return cx


def build_eagon_northcott(n: int) -> FreeComplex:
    if n < 1:
        raise ValueError("n must be >= 1")
    return eagon_northcott(section_complex(n), n)


@dataclass
class WarmupComparison:
    same_terms: bool
    warmup_exact: ExactnessReport
    en_exact: ExactnessReport
    coker_mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.same_terms and self.warmup_exact.ok and self.en_exact.ok
                and not self.coker_mismatches)

    def __bool__(self):
        return self.ok


def compare_warmup(n: int, window=None, prime: int | None = DEFAULT_PRIME) -> WarmupComparison:
    A = build_pn_warmup(n)
    B = build_eagon_northcott(n)
    same = (len(A.terms) == len(B.terms)
            and all(Counter(s.degrees()) == Counter(t.degrees())
                    for s, t in zip(A.terms, B.terms)))
    if window is None:
        window = default_window(A)
    ea = verify_exactness(A, window, prime)
    eb = verify_exactness(B, window, prime)
    bad = []
    for d in box(*window):
        ca, cb = cokernel_dim(A, d, prime), cokernel_dim(B, d, prime)
        if ca != cb:
            bad.append((tuple(d), ca, cb))
    return WarmupComparison(same, ea, eb, bad)
