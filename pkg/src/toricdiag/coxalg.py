"""Multigraded Cox rings, graded free modules and linear free complexes.

Conventions.  A generator of a graded free module is recorded by its *twist*
e, i.e. the summand S(e); its basis element lives in degree -e, so the
degree-d piece of S(e) is spanned by monomials of degree d + e.  A matrix
entry c*v from source generator g' to target generator g requires
twist(g) = twist(g') + deg(v).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
import weakref

from .linalg import DEFAULT_PRIME, ScalarMatrix, scalar_rank

Monomial = tuple  # exponent vector indexed by ring variables
CONSTANT = None   # variable slot of a constant matrix entry
MONOMIAL_CACHE_LIMIT = 2_000_000   # monomials cached across all rings before a reset
_CACHED = [0]
_CACHING = weakref.WeakSet()


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


@dataclass(frozen=True, eq=False)
class RingSpec:
    """Polynomial ring with a positive Z^g grading.

    ``weight`` is a linear functional positive on every variable degree; it
    bounds exponents during enumeration.  A ring built with ``factors`` is
    their tensor product, and its graded pieces are products of theirs.
    """
    variable_names: tuple[str, ...]
    degrees: tuple[tuple[int, ...], ...]
    weight: tuple[int, ...]
    prime: int | None = None
    factors: tuple["RingSpec", ...] = ()
    _cache: dict = field(default_factory=dict, repr=False)
    _count_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.variable_names) != len(self.degrees):
            raise ValueError("one degree per variable required")
        gs = {len(d) for d in self.degrees}
        if len(gs) > 1:
            raise ValueError("inconsistent grading group ranks")
        if len(set(self.variable_names)) != len(self.variable_names):
            raise ValueError("duplicate variable names")
        for d in self.degrees:
            if sum(w * t for w, t in zip(self.weight, d)) <= 0:
                raise ValueError(f"weight {self.weight} not positive on {d}")

    def _key(self):
        return (self.variable_names, self.degrees, self.weight, self.prime)

    def _remember(self, key, res):
        # monomial lists can be huge; all rings start over once too many are held
        if _CACHED[0] + len(res) > MONOMIAL_CACHE_LIMIT:
            for ring in list(_CACHING):
                ring._cache.clear()
            _CACHING.clear()
            _CACHED[0] = 0
        self._cache[key] = res
        _CACHING.add(self)
        _CACHED[0] += len(res)

    def __eq__(self, other):
        if not isinstance(other, RingSpec):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def ngens(self) -> int:
        return len(self.variable_names)

    @property
    def rank(self) -> int:
        return len(self.weight)

    def index(self, name: str) -> int:
        return self.variable_names.index(name)

    def degree(self, mono: Monomial) -> tuple[int, ...]:
        out = [0] * self.rank
        for e, deg in zip(mono, self.degrees):
            if e:
                for t in range(self.rank):
                    out[t] += e * deg[t]
        return tuple(out)

    def var_monomial(self, i: int) -> Monomial:
        return tuple(1 if j == i else 0 for j in range(self.ngens))

    def _w(self, d) -> int:
        return sum(a * b for a, b in zip(self.weight, d))

    def monomials(self, d) -> tuple[Monomial, ...]:
        """All monomials of degree d, in ascending lex order of exponents."""
        d = tuple(d)
        hit = self._cache.get(d)
        if hit is not None:
            return hit
        if self.factors:
            parts = []
            pos = 0
            for f in self.factors:
                parts.append(f.monomials(d[pos:pos + f.rank]))
                pos += f.rank
            out = [()]
            for p in parts:
                out = [a + b for a in out for b in p]
            res = tuple(out)
        else:
            res = tuple(self._enum(0, d))
        self._remember(d, res)
        return res

    def _enum(self, i: int, rem) -> tuple[Monomial, ...]:
        key = (i, rem)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        W = self._w(rem)
        if W < 0:
            res: tuple = ()
        elif i == self.ngens - 1:
            deg = self.degrees[i]
            wv = self._w(deg)
            e = W // wv
            res = ((e,),) if W % wv == 0 and tuple(e * t for t in deg) == rem else ()
        else:
            deg = self.degrees[i]
            wv = self._w(deg)
            out = []
            cur = rem
            for e in range(W // wv + 1):
                for tail in self._enum(i + 1, cur):
                    out.append((e,) + tail)
                cur = _sub(cur, deg)
            res = tuple(out)
        self._remember(key, res)
        return res

    def count(self, d) -> int:
        """Dimension of the degree-d piece."""
        d = tuple(d)
        hit = self._count_cache.get(d)
        if hit is not None:
            return hit
        if self.factors:
            n = 1
            pos = 0
            for f in self.factors:
                n *= f.count(d[pos:pos + f.rank])
                if not n:
                    break
                pos += f.rank
        else:
            n = self._count(0, d)
        self._count_cache[d] = n
        return n

    def _count(self, i: int, rem) -> int:
        key = ("#", i, rem)
        hit = self._count_cache.get(key)
        if hit is not None:
            return hit
        W = self._w(rem)
        if W < 0:
            n = 0
        elif i == self.ngens - 1:
            deg = self.degrees[i]
            wv = self._w(deg)
            e = W // wv
            n = int(W % wv == 0 and tuple(e * t for t in deg) == rem)
        else:
            deg = self.degrees[i]
            n = 0
            cur = rem
            for _ in range(W // self._w(deg) + 1):
                n += self._count(i + 1, cur)
                cur = _sub(cur, deg)
        self._count_cache[key] = n
        return n


def product_ring(*factors: RingSpec, prime: int | None = None) -> RingSpec:
    names, degs, weight = [], [], []
    total = sum(f.rank for f in factors)
    pos = 0
    for f in factors:
        names += f.variable_names
        for d in f.degrees:
            degs.append((0,) * pos + d + (0,) * (total - pos - f.rank))
        weight += f.weight
        pos += f.rank
    return RingSpec(tuple(names), tuple(degs), tuple(weight), prime,
                    tuple(factors))


# -- fiber monomials on the Hirzebruch surface F_{a_s} ----------------------

def fiber_ring(a_s: int) -> RingSpec:
    """Cox ring k[u0..u3] of F_{a_s}, graded by the columns of C."""
    return RingSpec(("u0", "u1", "u2", "u3"),
                    ((1, 0), (-a_s, 1), (1, 0), (0, 1)), (1, a_s + 1))


def fiber_monomials(a_s: int, i: int, j: int) -> list[Monomial]:
    """Exponent vectors (c0, c1, c2, c3) with c0 - a_s*c1 + c2 = i and c1 + c3 = j."""
    if a_s < 0:
        raise ValueError("a_s must be nonnegative")
    out = []
    for c1 in range(max(j, -1) + 1):
        c3 = j - c1
        tot = i + a_s * c1
        if tot < 0:
            continue
        for c0 in range(tot + 1):
            out.append((c0, c1, tot - c0, c3))
    out.sort()
    return out


def monomial_degree_prefix(mono, a_s: int) -> tuple[int, int, int, int]:
    """First four coordinates of the Z^6 degree of a u-monomial.

    ``mono`` is either a 4-tuple of u-exponents or a mapping from variable
    names to exponents; any x/y variable is rejected.
    """
    if isinstance(mono, dict):
        bad = [v for v, e in mono.items() if e and v not in ("u0", "u1", "u2", "u3")]
        if bad:
            raise ValueError(f"not a fiber monomial: involves {bad}")
        mono = tuple(mono.get(v, 0) for v in ("u0", "u1", "u2", "u3"))
    if len(mono) != 4:
        raise ValueError("fiber monomials have exactly four exponents")
    c0, c1, _, _ = mono
    d1 = c0 - a_s * c1
    d2 = c1
    return (d1, d2, -d1, -d2)


def format_fiber_monomial(mono) -> str:
    parts = []
    for k, e in enumerate(mono):
        if e == 1:
            parts.append(f"u{k}")
        elif e:
            parts.append(f"u{k}^{e}")
    return "".join(parts) or "1"


def parse_fiber_monomial(text: str) -> Monomial:
    exps = [0, 0, 0, 0]
    if text == "1":
        return tuple(exps)
    for chunk in text.split("u")[1:]:
        if "^" in chunk:
            k, e = chunk.split("^")
        else:
            k, e = chunk, "1"
        exps[int(k)] += int(e)
    return tuple(exps)


# -- graded free modules, linear matrices, complexes -------------------------

@dataclass(frozen=True)
class Generator:
    degree: tuple[int, ...]
    label: str


@dataclass(frozen=True)
class GradedFreeModule:
    generators: tuple[Generator, ...] = ()

    def __post_init__(self):
        labels = [g.label for g in self.generators]
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be unique within a module")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def degrees(self) -> list[tuple[int, ...]]:
        return [g.degree for g in self.generators]

    def __len__(self):
        return len(self.generators)


@dataclass(frozen=True)
class Entry:
    row: int
    col: int
    coeff: object          # int or Fraction
    var: int | None        # ring variable index, or CONSTANT


@dataclass(frozen=True)
class LinearMatrix:
    rows: int
    cols: int
    entries: tuple[Entry, ...] = ()

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if not (0 <= e.row < self.rows and 0 <= e.col < self.cols):
                raise ValueError(f"entry {e} out of bounds")
            if (e.row, e.col) in seen:
                raise ValueError(f"two entries at ({e.row}, {e.col})")
            if e.coeff == 0:
                raise ValueError("zero coefficients are not stored")
            seen.add((e.row, e.col))

    def by_column(self) -> dict[int, list[Entry]]:
        out: dict[int, list[Entry]] = {}
        for e in self.entries:
            out.setdefault(e.col, []).append(e)
        return out

    def check_homogeneous(self, ring: RingSpec, target: GradedFreeModule,
                          source: GradedFreeModule) -> None:
        assert target.rank == self.rows and source.rank == self.cols
        zero = (0,) * ring.rank
        for e in self.entries:
            dv = zero if e.var is None else ring.degrees[e.var]
            want = _add(source.generators[e.col].degree, dv)
            got = target.generators[e.row].degree
            if want != got:
                raise ValueError(
                    f"inhomogeneous entry {e}: target twist {got}, expected {want}")


@dataclass(frozen=True)
class FreeComplex:
    """terms[k] sits in homological degree k; diffs[k-1] is d_k: terms[k] -> terms[k-1]."""
    ring: RingSpec
    terms: tuple[GradedFreeModule, ...]
    diffs: tuple[LinearMatrix, ...]

    def __post_init__(self):
        if len(self.diffs) != max(len(self.terms) - 1, 0):
            raise ValueError("need one differential between each pair of terms")
        for k, D in enumerate(self.diffs, start=1):
            if D.rows != self.terms[k - 1].rank or D.cols != self.terms[k].rank:
                raise ValueError(f"shape mismatch at d_{k}")

    def d(self, k: int) -> LinearMatrix:
        return self.diffs[k - 1]

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def ranks(self) -> list[int]:
        return [t.rank for t in self.terms]

    def check_homogeneous(self) -> None:
        for k, D in enumerate(self.diffs, start=1):
            D.check_homogeneous(self.ring, self.terms[k - 1], self.terms[k])

    def twist(self, shift) -> "FreeComplex":
        terms = tuple(
            GradedFreeModule(tuple(Generator(_add(g.degree, shift), g.label)
                                   for g in t.generators))
            for t in self.terms)
        return FreeComplex(self.ring, terms, self.diffs)

    def linear_entries_only(self) -> bool:
        return all(e.var is not None for D in self.diffs for e in D.entries)


def direct_sum(a: FreeComplex, b: FreeComplex, tags=("A", "B")) -> FreeComplex:
    """Direct sum of two complexes over the same ring; labels get prefixed."""
    n = max(len(a.terms), len(b.terms))
    def term(c, k):
        return c.terms[k] if k < len(c.terms) else GradedFreeModule()
    terms = []
    for k in range(n):
        gens = [Generator(g.degree, f"{tags[0]}:{g.label}") for g in term(a, k).generators]
        gens += [Generator(g.degree, f"{tags[1]}:{g.label}") for g in term(b, k).generators]
        terms.append(GradedFreeModule(tuple(gens)))
    diffs = []
    for k in range(1, n):
        ra, ca = term(a, k - 1).rank, term(a, k).rank
        ents = list(a.d(k).entries) if k < len(a.terms) else []
        if k < len(b.terms):
            ents += [Entry(e.row + ra, e.col + ca, e.coeff, e.var) for e in b.d(k).entries]
        diffs.append(LinearMatrix(terms[k - 1].rank, terms[k].rank, tuple(ents)))
    return FreeComplex(a.ring, tuple(terms), tuple(diffs))


# -- degree-wise evaluation --------------------------------------------------

def graded_basis(ring: RingSpec, module: GradedFreeModule, d) -> list[tuple[int, Monomial]]:
    """(generator index, monomial) pairs spanning the degree-d piece."""
    out = []
    for gi, g in enumerate(module.generators):
        for mono in ring.monomials(_add(d, g.degree)):
            out.append((gi, mono))
    return out


def graded_dim(ring: RingSpec, module: GradedFreeModule, d) -> int:
    return sum(ring.count(_add(d, g.degree)) for g in module.generators)


@dataclass
class ScalarComplex:
    dims: list[int]
    matrices: list[ScalarMatrix]   # matrices[k-1] : slot k -> slot k-1

    def is_complex(self, prime: int | None = None) -> bool:
        for k in range(1, len(self.matrices)):
            if not (self.matrices[k - 1] @ self.matrices[k]).is_zero(prime):
                return False
        return True

    def ranks(self, prime: int | None = None) -> list[int]:
        return [scalar_rank(M, prime) if M.rows else 0 for M in self.matrices]

    def homology(self, prime: int | None = None) -> list[int]:
        rk = [0] + self.ranks(prime) + [0]
        return [self.dims[k] - rk[k] - rk[k + 1] for k in range(len(self.dims))]


def _bump(mono, i):
    return mono[:i] + (mono[i] + 1,) + mono[i + 1:]


def evaluate_complex_at_degree(c: FreeComplex, d) -> ScalarComplex:
    """The strand of c in multidegree d, with monomial bases in fixed order."""
    ring = c.ring
    d = tuple(d)
    bases = []
    for t in c.terms:
        bases.append([ring.monomials(_add(d, g.degree)) for g in t.generators])
    offsets = []
    dims = []
    for per_gen in bases:
        off, tot = [], 0
        for monos in per_gen:
            off.append(tot)
            tot += len(monos)
        offsets.append(off)
        dims.append(tot)
    index_cache: dict[tuple[int, int], dict] = {}

    def index_of(k, gi):
        key = (k, gi)
        idx = index_cache.get(key)
        if idx is None:
            idx = {m: j for j, m in enumerate(bases[k][gi])}
            index_cache[key] = idx
        return idx

    mats = []
    for k, D in enumerate(c.diffs, start=1):
        M = ScalarMatrix(dims[k - 1], dims[k])
        if dims[k] and dims[k - 1]:
            for e in D.entries:
                src = bases[k][e.col]
                if not src:
                    continue
                roff = offsets[k - 1][e.row]
                coff = offsets[k][e.col]
                if e.var is None:
                    tgt = index_of(k - 1, e.row)
                    for j, mono in enumerate(src):
                        M.add(roff + tgt[mono], coff + j, e.coeff)
                else:
                    tgt = index_of(k - 1, e.row)
                    v = e.var
                    for j, mono in enumerate(src):
                        M.add(roff + tgt[_bump(mono, v)], coff + j, e.coeff)
        mats.append(M)
    return ScalarComplex(dims, mats)


# -- symbolic d^2 = 0 ---------------------------------------------------------

@dataclass
class DDZeroResult:
    ok: bool
    witness: tuple | None = None   # (k, row, col, {monomial: coeff})

    def __bool__(self):
        return self.ok


def check_ddzero(c: FreeComplex) -> DDZeroResult:
    """Verify d_k d_{k+1} = 0 over the ring; report the first nonzero product."""
    for k in range(1, len(c.diffs)):
        a_cols = c.d(k).by_column()
        for col, b_entries in sorted(c.d(k + 1).by_column().items()):
            acc: dict[tuple, object] = {}
            for eb in b_entries:
                vb = -1 if eb.var is None else eb.var
                for ea in a_cols.get(eb.row, ()):
                    va = -1 if ea.var is None else ea.var
                    # monomial packed as (row, smaller var, larger var); -1 marks a constant
                    key = (ea.row, va, vb) if va <= vb else (ea.row, vb, va)
                    acc[key] = acc.get(key, 0) + ea.coeff * eb.coeff
            bad = sorted(key for key, v in acc.items() if v != 0)
            if bad:
                row = bad[0][0]
                names = {}
                for r_, va, vb in bad:
                    if r_ == row:
                        m = tuple(i for i in (va, vb) if i >= 0)
                        names[tuple(c.ring.variable_names[i] for i in m)] = acc[(r_, va, vb)]
                return DDZeroResult(False, (k, row, col, names))
    return DDZeroResult(True)


# -- cokernel dimensions -----------------------------------------------------

def cokernel_dim(c: FreeComplex, d, prime: int | None = DEFAULT_PRIME) -> int:
    """dim of coker(d_1) in degree d."""
    if not c.diffs:
        return graded_dim(c.ring, c.terms[0], d)
    sc = evaluate_complex_at_degree(
        FreeComplex(c.ring, c.terms[:2], c.diffs[:1]), d)
    return sc.dims[0] - (scalar_rank(sc.matrices[0], prime) if sc.matrices[0].rows else 0)


def box(lo, hi):
    """All integer points of the box [lo, hi] (inclusive), lexicographic."""
    from itertools import product
    return product(*[range(a, b + 1) for a, b in zip(lo, hi)])


def exterior_subsets(n: int, k: int):
    return combinations(range(n), k)


@lru_cache(maxsize=None)
def cox_ring(X, primed: bool = False, prime: int | None = None) -> RingSpec:
    """Z^2-graded Cox ring of X; ``primed`` names the second-factor copy."""
    suffix = "'" if primed else ""
    names = tuple(v + suffix for v in X.variable_names)
    degs = tuple(tuple(int(t) for t in col) for col in X.grading.T)
    return RingSpec(names, degs, (1, X.a_s + 1), prime)


@lru_cache(maxsize=None)
def cox_ring_product(X, prime: int | None = None) -> RingSpec:
    """Z^4-graded Cox ring of X x X."""
    return product_ring(cox_ring(X), cox_ring(X, primed=True), prime=prime)
