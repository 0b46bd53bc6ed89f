"""Cohomology of line bundles O(k, l) on X and on the fiber F_{a_s}.

Two independent routes are provided: the pushforward formula along
X -> P^r (``cohomology_dim``), and a character-by-character computation of
Cech cohomology on the fan (``cohomology_oracle``).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb

import numpy as np

from .linalg import rank_rational
from .toric import ToricVariety


def h0_hirzebruch(a: int, k: int, l: int) -> int:
    """dim H^0(F_a, O(k, l)); zero when l < 0."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    return sum(max(0, a * i + k + 1) for i in range(l + 1))


def projective_space_h(r: int, d: int, i: int) -> int:
    """dim H^i(P^r, O(d))."""
    if i == 0:
        return comb(d + r, r) if d >= 0 else 0
    if i == r:
        return comb(-d - 1, r) if d <= -r - 1 else 0
    return 0


@lru_cache(maxsize=None)
def sym_twists(a: tuple[int, ...], l: int) -> tuple[tuple[int, int], ...]:
    """Sym^l(O + O(a_1) + ... + O(a_s)) as (twist, multiplicity) pairs."""
    if l < 0:
        return ()
    # One summand O(sum c_i a_i) per composition c_0 + ... + c_s = l.
    poly = {(0, 0): 1}  # (degree used, twist) -> count
    for ai in (0,) + tuple(a):
        nxt: dict = {}
        for (used, tw), c in poly.items():
            for e in range(l - used + 1):
                key = (used + e, tw + e * ai)
                nxt[key] = nxt.get(key, 0) + c
        poly = nxt
    out = Counter()
    for (used, tw), c in poly.items():
        if used == l:
            out[tw] += c
    return tuple(sorted(out.items()))


def cohomology_dim(X: ToricVariety, d, i: int) -> int:
    """dim H^i(X, O(k, l)) via the pushforward to P^r."""
    if not 0 <= i <= X.dim:
        raise IndexError(f"cohomological index {i} outside 0..{X.dim}")
    k, l = d
    r, s = X.r, X.s
    if l >= 0:
        return sum(mult * projective_space_h(r, k + t, i)
                   for t, mult in sym_twists(X.a, l))
    if l <= -s - 1:
        j = i - s
        if j < 0:
            return 0
        return sum(mult * projective_space_h(r, k - X.m - t, j)
                   for t, mult in sym_twists(X.a, -l - s - 1))
    return 0


def cohomology_vector(X: ToricVariety, d) -> list[int]:
    return [cohomology_dim(X, d, i) for i in range(X.dim + 1)]


def vanishing(X: ToricVariety, d, i: int) -> bool:
    """Whether H^i(X, O(k, l)) = 0, decided by inequalities alone."""
    k, l = d
    r, s, m, a_s = X.r, X.s, X.m, X.a_s
    if i not in (0, r, s, r + s):
        return True
    if i == 0:
        return l < 0 or k + a_s * l < 0
    if i == r + s:
        return (-r - 1 - a_s * (l + s + 1) + m < k) or (-s - 1 < l)
    if r == s:
        # H^r collects both the rho-type and sigma-type contributions.
        return ((-r - 1 < k) or (l < 0)) and ((-s - 1 < l) or (k < m))
    if i == r:
        return (-r - 1 < k) or (l < 0)
    return (-s - 1 < l) or (k < m)


def is_acyclic(X: ToricVariety, d) -> bool:
    k, l = d
    r, s, m, a_s = X.r, X.s, X.m, X.a_s
    if -s - 1 < l < 0:
        return True
    if -r - 1 < k and l >= 0:
        return True
    if -r - 1 - a_s * (l + s + 1) + m < k < m and l <= -s - 1:
        return True
    return False


# -- independent oracle -------------------------------------------------------

ORACLE_MAX_DIM = 4


@lru_cache(maxsize=None)
def _reduced_betti(X: ToricVariety, V: frozenset) -> tuple[int, ...]:
    """Reduced cohomology dims H~^q, q = -1..dim, of the subfan on rays V."""
    maxcones = X.maximal_cones
    faces: dict[int, list[tuple[int, ...]]] = {}
    verts = sorted(V)
    for size in range(len(verts) + 1):
        for T in combinations(verts, size):
            if size == 0 or any(set(T) <= c for c in maxcones):
                faces.setdefault(size - 1, []).append(T)
    top = X.dim
    ranks = {}
    for q in range(-1, top + 1):
        src = faces.get(q, [])
        tgt = faces.get(q + 1, [])
        if not src or not tgt:
            ranks[q] = 0
            continue
        idx = {T: j for j, T in enumerate(src)}
        mat = [[0] * len(src) for _ in tgt]
        for a, T in enumerate(tgt):
            for t in range(len(T)):
                mat[a][idx[T[:t] + T[t + 1:]]] = (-1) ** t
        ranks[q] = rank_rational(mat)
    out = []
    for q in range(-1, top + 1):
        n = len(faces.get(q, []))
        out.append(n - ranks[q] - ranks.get(q - 1, 0))
    return tuple(out)


def _character_box(P: np.ndarray, coeffs) -> list[tuple[int, int]]:
    """Bounding box of all vertices of the arrangement <mu, u> = -d, -d-1."""
    nrays, n = P.shape
    lo = [0] * n
    hi = [0] * n
    for rays in combinations(range(nrays), n):
        A = P[list(rays)].astype(float)
        if abs(np.linalg.det(A)) < 1e-9:
            continue
        for shifts in product((0, 1), repeat=n):
            b = np.array([-coeffs[j] - sh for j, sh in zip(rays, shifts)], dtype=float)
            mu = np.linalg.solve(A, b)
            for t in range(n):
                lo[t] = min(lo[t], int(np.floor(mu[t] + 1e-9)))
                hi[t] = max(hi[t], int(np.ceil(mu[t] - 1e-9)))
    return [(a - 1, b + 1) for a, b in zip(lo, hi)]


def oracle_vector(X: ToricVariety, d) -> list[int]:
    """All dims H^i(X, O(d)), i = 0..dim, by Cech cohomology per character."""
    if X.dim > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to dim <= {ORACLE_MAX_DIM}, got {X.dim}")
    P = X.ray_matrix
    coeffs = np.array(X.divisor_coefficients(d), dtype=np.int64)
    bounds = _character_box(P, coeffs)
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in bounds]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    vals = grid @ P.T                     # <mu, u_rho> for every character
    bits = (vals < -coeffs).astype(np.int64)
    codes = bits @ (1 << np.arange(P.shape[0], dtype=np.int64))
    uniq, counts = np.unique(codes, return_counts=True)
    out = [0] * (X.dim + 1)
    for code, cnt in zip(uniq.tolist(), counts.tolist()):
        V = frozenset(j for j in range(P.shape[0]) if code >> j & 1)
        betti = _reduced_betti(X, V)
        for i in range(X.dim + 1):
            # H^i(X, O(D))_mu = H~^{i-1}(V); betti[0] is q = -1
            out[i] += cnt * betti[i]
    return out


def cohomology_oracle(X: ToricVariety, d, i: int) -> int:
    if not 0 <= i <= X.dim:
        raise IndexError(f"cohomological index {i} outside 0..{X.dim}")
    return oracle_vector(X, d)[i]


def serre_dual(X: ToricVariety, d) -> tuple[int, int]:
    k, l = d
    return (X.m - X.r - 1 - k, -X.s - 1 - l)


# -- sheaves given as sums of line bundles, and their tables ------------------

@dataclass(frozen=True)
class SheafSpec:
    """Finite direct sum of line bundles: ((twist, multiplicity), ...)."""
    summands: tuple[tuple[tuple[int, int], int], ...] = ()

    def __post_init__(self):
        merged: Counter = Counter()
        for tw, mult in self.summands:
            if mult < 1:
                raise ValueError(f"multiplicity must be >= 1, got {mult}")
            merged[(int(tw[0]), int(tw[1]))] += int(mult)
        object.__setattr__(self, "summands", tuple(sorted(merged.items())))

    @classmethod
    def of(cls, *twists) -> "SheafSpec":
        return cls(tuple((tuple(t), 1) for t in twists))

    def twisted(self, shift) -> "SheafSpec":
        return SheafSpec(tuple(((b + shift[0], c + shift[1]), m)
                               for (b, c), m in self.summands))

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.summands)

    def __bool__(self):
        return bool(self.summands)


Window = tuple[tuple[int, int], tuple[int, int]]


@dataclass
class CohomologyTable:
    window: Window
    dim: int
    entries: dict = field(default_factory=dict)   # (i, (k, l)) -> int

    def degrees(self):
        (k0, k1), (l0, l1) = self.window
        return [(k, l) for k in range(k0, k1 + 1) for l in range(l0, l1 + 1)]

    def get(self, i: int, d) -> int:
        return self.entries.get((i, tuple(d)), 0)

    def __eq__(self, other):
        if not isinstance(other, CohomologyTable):
            return NotImplemented
        if self.window != other.window or self.dim != other.dim:
            return False
        keys = set(self.entries) | set(other.entries)
        return all(self.entries.get(k, 0) == other.entries.get(k, 0) for k in keys)

    def contains(self, d) -> bool:
        (k0, k1), (l0, l1) = self.window
        return k0 <= d[0] <= k1 and l0 <= d[1] <= l1


def cohomology_table(X: ToricVariety, F: SheafSpec, window: Window) -> CohomologyTable:
    """gamma(F) on the window: entry (i, (k, l)) = dim H^i(X, F(k, l))."""
    window = (tuple(window[0]), tuple(window[1]))
    table = CohomologyTable(window, X.dim)
    for k, l in table.degrees():
        for i in range(X.dim + 1):
            v = sum(mult * cohomology_dim(X, (b + k, c + l), i)
                    for (b, c), mult in F.summands)
            if v:
                table.entries[(i, (k, l))] = v
    return table
