"""Cancelling unit entries of a free complex.

If d_k has a nonzero constant entry c at (a, b), the generators b of slot k
and a of slot k-1 split off as a contractible summand; what remains is
homotopy equivalent, with d_k replaced by D - gamma c^{-1} mu.  Entries of the
reduced complex are polynomials, stored as {exponent tuple: coefficient}.
Homology, and in particular coker d_1, is unchanged in every degree.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

from .coxalg import FreeComplex, GradedFreeModule, RingSpec, ScalarComplex, box
from .linalg import DEFAULT_PRIME, ScalarMatrix, scalar_rank


def _norm(v, prime):
    return v % prime if prime else v


def _inv(v, prime):
    return pow(v, -1, prime) if prime else Fraction(1) / v


@dataclass
class PolyComplex:
    ring: RingSpec
    terms: tuple            # GradedFreeModule per slot
    diffs: tuple            # per k >= 1: {col: {row: {mono: coeff}}}
    prime: int | None

    def ranks(self):
        return [t.rank for t in self.terms]


def reduce_units(c: FreeComplex, prime: int | None = DEFAULT_PRIME) -> PolyComplex:
    n = c.ring.ngens
    zero = (0,) * n
    var_mono = [c.ring.var_monomial(i) for i in range(n)]
    cols, rows = [None], [None]
    for D in c.diffs:
        cd, rd = {}, {}
        for e in D.entries:
            mono = zero if e.var is None else var_mono[e.var]
            p = {mono: _norm(e.coeff, prime)}
            cd.setdefault(e.col, {})[e.row] = p
            rd.setdefault(e.row, {})[e.col] = p
        cols.append(cd)
        rows.append(rd)
    alive = [set(range(t.rank)) for t in c.terms]
    N = len(c.terms)

    def drop_row(k, a):
        # generator a of slot k-1 leaves d_k
        for b in rows[k].pop(a, {}):
            del cols[k][b][a]

    def drop_col(k, b):
        for a in cols[k].pop(b, {}):
            del rows[k][a][b]

    for k in range(1, N):
        pending = [(a, b) for b, col in cols[k].items() for a, p in col.items()
                   if len(p) == 1 and zero in p]
        while pending:
            a, b = pending.pop()
            p = cols[k].get(b, {}).get(a)
            if p is None or len(p) != 1 or zero not in p:
                continue
            cinv = _inv(p[zero], prime)
            gamma = {a2: q for a2, q in cols[k][b].items() if a2 != a}
            mu = {b2: q for b2, q in rows[k][a].items() if b2 != b}
            for a2, g in gamma.items():
                for b2, m in mu.items():
                    cur = dict(cols[k].get(b2, {}).get(a2, {}))
                    for mg, cg in g.items():
                        for mm, cm in m.items():
                            mono = tuple(x + y for x, y in zip(mg, mm))
                            v = _norm(cur.get(mono, 0) - cg * cm * cinv, prime)
                            if v:
                                cur[mono] = v
                            else:
                                cur.pop(mono, None)
                    if cur:
                        cols[k].setdefault(b2, {})[a2] = cur
                        rows[k].setdefault(a2, {})[b2] = cur
                        if len(cur) == 1 and zero in cur:
                            pending.append((a2, b2))
                    else:
                        cols[k].get(b2, {}).pop(a2, None)
                        rows[k].get(a2, {}).pop(b2, None)
            drop_row(k, a)
            drop_col(k, b)
            if k + 1 < N:
                drop_row(k + 1, b)
            if k - 1 >= 1:
                drop_col(k - 1, a)
            alive[k].discard(b)
            alive[k - 1].discard(a)

    keep = [sorted(s) for s in alive]
    new_index = [{old: i for i, old in enumerate(ks)} for ks in keep]
    terms = tuple(GradedFreeModule(tuple(c.terms[k].generators[i] for i in ks))
                  for k, ks in enumerate(keep))
    diffs = []
    for k in range(1, N):
        d = {}
        for b, col in cols[k].items():
            if b not in new_index[k]:
                continue
            out = {new_index[k - 1][a]: p for a, p in col.items() if p}
            if out:
                d[new_index[k][b]] = out
        diffs.append(d)
    return PolyComplex(c.ring, terms, tuple(diffs), prime)


_SHIFT = 20   # bits per exponent in packed monomial keys


def _pack(mono) -> int:
    """Monomial as one integer, so that multiplying monomials is adding keys."""
    k = 0
    for t, e in enumerate(mono):
        k |= e << (_SHIFT * t)
    return k


@lru_cache(maxsize=256)
def _packed_basis(ring: RingSpec, degree) -> tuple:
    return tuple(_pack(m) for m in ring.monomials(degree))


def evaluate_poly_complex(pc: PolyComplex, d) -> ScalarComplex:
    ring = pc.ring
    d = tuple(d)
    bases, offsets, dims = [], [], []
    for t in pc.terms:
        per, off, tot = [], [], 0
        for g in t.generators:
            monos = ring.monomials(tuple(x + y for x, y in zip(d, g.degree)))
            per.append(monos)
            off.append(tot)
            tot += len(monos)
        bases.append(per)
        offsets.append(off)
        dims.append(tot)
    packed = {}

    def keys(k, gi):
        ck = (k, gi)
        if ck not in packed:
            g = pc.terms[k].generators[gi]
            packed[ck] = _packed_basis(ring, tuple(x + y for x, y in zip(d, g.degree)))
        return packed[ck]

    mats = []
    for k, D in enumerate(pc.diffs, start=1):
        M = ScalarMatrix(dims[k - 1], dims[k])
        if dims[k] and dims[k - 1]:
            rows = M.rows
            for b, col in D.items():
                if not bases[k][b]:
                    continue
                src = keys(k, b)
                coff = offsets[k][b]
                for a, p in col.items():
                    if not bases[k - 1][a]:
                        continue
                    tgt = {m: j for j, m in enumerate(keys(k - 1, a))}
                    roff = offsets[k - 1][a]
                    for mono, cf in p.items():
                        mk = _pack(mono)
                        for j, s in enumerate(src):
                            i = roff + tgt[s + mk]
                            row = rows.setdefault(i, {})
                            v = row.get(coff + j, 0) + cf
                            if v:
                                row[coff + j] = v
                            else:
                                del row[coff + j]
            for i in [i for i, r in rows.items() if not r]:
                del rows[i]
        mats.append(M)
    return ScalarComplex(dims, mats)


def poly_homology(pc: PolyComplex, d) -> list[int]:
    """Homology dimensions of the degree-d strand, slot by slot."""
    sc = evaluate_poly_complex(pc, d)
    ranks = [0] + [scalar_rank(M, pc.prime) if M.rows else 0 for M in sc.matrices] + [0]
    return [sc.dims[k] - ranks[k] - ranks[k + 1] for k in range(len(sc.dims))]


def poly_window_homology(pc: PolyComplex, window):
    lo, hi = window
    return {tuple(d): poly_homology(pc, d) for d in box(lo, hi)}
