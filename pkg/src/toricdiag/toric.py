"""Smooth projective toric varieties of Picard rank 2 and the diagonal bundle.

Every such variety is a projective bundle P(O + O(a_1) + ... + O(a_s)) over
P^r.  The Picard group is identified with Z^2 using the classes of the rays
rho_0 and sigma_0, so the Cox ring k[x_0..x_r, y_0..y_s] has
deg x_i = (1, 0), deg y_0 = (0, 1) and deg y_i = (-a_i, 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np


class KleinschmidtError(ValueError):
    """Raised when (r; a) is not in Kleinschmidt normal form."""


@dataclass(frozen=True)
class KleinschmidtData:
    r: int
    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(t) for t in self.a)
        object.__setattr__(self, "a", a)
        if int(self.r) < 1:
            raise KleinschmidtError(
                f"base dimension r must be >= 1, got r={self.r}")
        if not a:
            raise KleinschmidtError(
                "twist sequence a must be nonempty (s >= 1, Picard rank 2)")
        if a[0] < 0:
            raise KleinschmidtError(
                f"twists must be nonnegative, got a_1={a[0]}")
        for i in range(len(a) - 1):
            if a[i] > a[i + 1]:
                raise KleinschmidtError(
                    f"twist sequence not ascending: a_{i + 1}={a[i]} > "
                    f"a_{i + 2}={a[i + 1]}")

    @property
    def s(self) -> int:
        return len(self.a)

    @property
    def m(self) -> int:
        return sum(self.a)

    @property
    def a_s(self) -> int:
        return self.a[-1]

    @property
    def dim(self) -> int:
        return self.r + self.s

    def twist(self, i: int) -> int:
        """a_i with the convention a_0 = 0."""
        return 0 if i == 0 else self.a[i - 1]


def _x_rays(r: int, a: tuple[int, ...]) -> np.ndarray:
    s = len(a)
    n = r + s
    P = np.zeros((r + s + 2, n), dtype=np.int64)
    P[0, :r] = -1
    P[0, r:] = a
    for i in range(r):
        P[1 + i, i] = 1
    P[r + 1, r:] = -1
    for j in range(s):
        P[r + 2 + j, r + j] = 1
    return P


def _x_grading(r: int, a: tuple[int, ...]) -> np.ndarray:
    A = np.zeros((2, r + len(a) + 2), dtype=np.int64)
    A[0, :r + 1] = 1
    A[1, r + 1:] = 1
    A[0, r + 2:] = [-t for t in a]
    return A


@dataclass(frozen=True, eq=False)
class ToricVariety:
    data: KleinschmidtData
    ray_matrix: np.ndarray = field(repr=False)
    grading: np.ndarray = field(repr=False)
    variable_names: tuple[str, ...] = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, ToricVariety) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    @property
    def r(self) -> int:
        return self.data.r

    @property
    def s(self) -> int:
        return self.data.s

    @property
    def a(self) -> tuple[int, ...]:
        return self.data.a

    @property
    def a_s(self) -> int:
        return self.data.a_s

    @property
    def m(self) -> int:
        return self.data.m

    @property
    def dim(self) -> int:
        return self.data.dim

    @property
    def name(self) -> str:
        return f"X(r={self.r}; a={','.join(map(str, self.a))})"

    def variable_degrees(self) -> list[tuple[int, int]]:
        return [tuple(int(v) for v in col) for col in self.grading.T]

    @cached_property
    def maximal_cones(self) -> tuple[frozenset[int], ...]:
        """Maximal cones as sets of row indices of the ray matrix.

        Each omits exactly one rho_i and one sigma_j.
        """
        rho = list(range(self.r + 1))
        sigma = list(range(self.r + 1, self.r + self.s + 2))
        cones = []
        for i in rho:
            for j in sigma:
                cones.append(frozenset(set(rho + sigma) - {i, j}))
        return tuple(cones)

    def is_cone(self, rays) -> bool:
        """True iff the given ray indices span a cone of the fan."""
        rays = set(rays)
        return not (set(range(self.r + 1)) <= rays
                    or set(range(self.r + 1, self.r + self.s + 2)) <= rays)

    def divisor_coefficients(self, d) -> list[int]:
        """Torus-invariant divisor k*D_rho0 + l*D_sigma0 representing O(k, l)."""
        k, l = d
        coeffs = [0] * (self.r + self.s + 2)
        coeffs[0] = k
        coeffs[self.r + 1] = l
        return coeffs


def build_variety(r: int, a) -> ToricVariety:
    """Validate Kleinschmidt data and build the ray and grading matrices."""
    data = KleinschmidtData(r, tuple(a))
    names = tuple([f"x{i}" for i in range(r + 1)]
                  + [f"y{j}" for j in range(data.s + 1)])
    return ToricVariety(data, _x_rays(r, data.a), _x_grading(r, data.a), names)


def hirzebruch(a: int) -> ToricVariety:
    return build_variety(1, (a,))


def nef_le(d1, d2) -> bool:
    """Componentwise order: O(d2 - d1) is nef."""
    return d2[0] - d1[0] >= 0 and d2[1] - d1[1] >= 0


def is_effective(X: ToricVariety, d) -> bool:
    k, l = d
    return l >= 0 and k + X.a_s * l >= 0


# -- the bundle E over X x X with fiber the Hirzebruch surface F_{a_s} ------

@dataclass(frozen=True)
class Binomial:
    """Two-term polynomial; each term is (coefficient, {variable: exponent})."""
    name: str
    terms: tuple[tuple[int, tuple[tuple[str, int], ...]], ...]

    def degree(self, degrees: dict[str, tuple[int, ...]]) -> tuple[int, ...]:
        degs = set()
        for _, mono in self.terms:
            g = len(next(iter(degrees.values())))
            tot = [0] * g
            for var, e in mono:
                for t in range(g):
                    tot[t] += e * degrees[var][t]
            degs.add(tuple(tot))
        if len(degs) != 1:
            raise ValueError(f"{self.name} is not homogeneous: {degs}")
        return degs.pop()

    def __str__(self):
        out = []
        for c, mono in self.terms:
            body = "".join(v if e == 1 else f"{v}^{e}" for v, e in mono if e)
            out.append(("+" if c > 0 else "-") + (body or "1"))
        s = "".join(out)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True, eq=False)
class DiagonalBundle:
    base: ToricVariety
    ray_matrix: np.ndarray = field(repr=False)
    grading: np.ndarray = field(repr=False)
    variables: tuple[str, ...] = field(repr=False)
    alpha: tuple[Binomial, ...]
    beta: tuple[Binomial, ...]

    def degree_of(self) -> dict[str, tuple[int, ...]]:
        return {v: tuple(int(t) for t in self.grading[:, j])
                for j, v in enumerate(self.variables)}


def _bundle_rays(X: ToricVariety) -> np.ndarray:
    P = X.ray_matrix
    n_rays, n = P.shape
    a_s = X.a_s
    v = np.zeros(n_rays, dtype=np.int64)
    w = np.zeros(n_rays, dtype=np.int64)
    v[0] = 1
    w[X.r + 1] = 1
    M = np.zeros((2 * n_rays + 4, 2 * n + 2), dtype=np.int64)
    M[:n_rays, :n] = P
    M[n_rays:2 * n_rays, n:2 * n] = P
    M[:n_rays, 2 * n] = v
    M[:n_rays, 2 * n + 1] = -w
    M[n_rays:2 * n_rays, 2 * n] = -v
    M[n_rays:2 * n_rays, 2 * n + 1] = w
    M[2 * n_rays:, 2 * n:] = [[-1, a_s], [0, 1], [1, 0], [0, -1]]
    return M


def _bundle_grading(X: ToricVariety) -> np.ndarray:
    A = X.grading
    n_vars = A.shape[1]
    a_s = X.a_s
    B = np.array([[1, -a_s, 0, 0], [0, 1, 0, 0]], dtype=np.int64)
    C = np.array([[1, -a_s, 1, 0], [0, 1, 0, 1]], dtype=np.int64)
    G = np.zeros((6, 2 * n_vars + 4), dtype=np.int64)
    G[0:2, :n_vars] = A
    G[2:4, n_vars:2 * n_vars] = A
    G[0:2, 2 * n_vars:] = B
    G[2:4, 2 * n_vars:] = -B
    G[4:6, 2 * n_vars:] = C
    return G


def build_diagonal_bundle(X: ToricVariety) -> DiagonalBundle:
    r, s, a_s = X.r, X.s, X.a_s
    names = list(X.variable_names)
    primed = [v + "'" for v in names]
    u = ["u0", "u1", "u2", "u3"]
    variables = tuple(names + primed + u)
    alpha = tuple(
        Binomial(f"alpha{i}",
                 ((1, (("u2", 1), (f"x{i}", 1))),
                  (-1, (("u0", 1), (f"x{i}'", 1)))))
        for i in range(r + 1))
    beta = []
    for i in range(s + 1):
        ai = X.data.twist(i)
        mono = tuple((v, e) for v, e in
                     (("u0", a_s - ai), ("u1", 1), ("u2", ai), (f"y{i}'", 1))
                     if e)
        beta.append(Binomial(f"beta{i}",
                             ((1, (("u3", 1), (f"y{i}", 1))), (-1, mono))))
    E = DiagonalBundle(X, _bundle_rays(X), _bundle_grading(X), variables,
                       alpha, tuple(beta))
    degs = E.degree_of()
    for i, al in enumerate(E.alpha):
        assert al.degree(degs) == (1, 0, 0, 0, 1, 0), al
    for i, be in enumerate(E.beta):
        assert be.degree(degs) == (-X.data.twist(i), 1, 0, 0, 0, 1), be
    return E
