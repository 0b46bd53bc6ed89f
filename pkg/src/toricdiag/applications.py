"""Virtual resolutions of line-bundle sums, and splitting criteria built on B(F)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .cohom import CohomologyTable, SheafSpec, cohomology_dim, cohomology_table, is_acyclic, vanishing
from .coxalg import FreeComplex
from .diagonal import DiagonalResolution, build_R
from .monad import Monad, build_monad
from .toric import ToricVariety, nef_le

WINDOW_MARGIN = 2


def _plus(u, v):
    return (u[0] + v[0], u[1] + v[1])


def _first_twists(R: DiagonalResolution):
    """Distinct first-factor twists L_1 of R_n, per slot n."""
    return [sorted({g.degree[:2] for g in t.generators}) for t in R.complex.terms]


# -- B(O(d))_1 ----------------------------------------------------------------

def b1_vanishes(X: ToricVariety, d, R: DiagonalResolution | None = None,
                fast: bool = False) -> bool:
    """Whether H^{n-1}(O(d) (x) L_1) = 0 for every n >= 1 and every R_n first factor L_1.

    Only n - 1 in {0, r, s} can carry cohomology (n - 1 = r + s is out of
    range), so ``fast`` restricts the scan to n in {1, r + 1, s + 1}.
    """
    R = R or build_R(X)
    firsts = _first_twists(R)
    slots = sorted({1, X.r + 1, X.s + 1}) if fast else range(1, X.dim + 1)
    for n in slots:
        if n > X.dim:
            continue
        for l1 in firsts[n]:
            if not vanishing(X, _plus(d, l1), n - 1):
                return False
    return True


# -- splitting types ----------------------------------------------------------

class RecoveryFailed(ValueError):
    pass


class WindowTooSmall(ValueError):
    pass


def _order_key(tw):
    # a linear extension of the componentwise order
    return (tw[0] + tw[1], tw[0])


@dataclass(frozen=True)
class SplittingType:
    parts: tuple[tuple[tuple[int, int], int], ...]

    def __post_init__(self):
        seen = set()
        clean = []
        for tw, mult in self.parts:
            tw = (int(tw[0]), int(tw[1]))
            if tw in seen:
                raise ValueError(f"twist {tw} listed twice")
            if mult < 1:
                raise ValueError(f"multiplicity of {tw} must be >= 1")
            seen.add(tw)
            clean.append((tw, int(mult)))
        clean.sort(key=lambda p: _order_key(p[0]), reverse=True)
        object.__setattr__(self, "parts", tuple(clean))

    @classmethod
    def from_dict(cls, d: dict) -> "SplittingType":
        return cls(tuple(d.items()))

    def as_dict(self) -> dict:
        return dict(self.parts)

    def sheaf(self) -> SheafSpec:
        return SheafSpec(self.parts)

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.parts)


@dataclass
class SplittingVerdict:
    nef_chain_ok: bool
    table_match: bool
    mismatches: list = field(default_factory=list)   # (i, degree, table, candidate)

    @property
    def conclusion(self) -> str:
        if self.nef_chain_ok and self.table_match:
            return "splits as candidate"
        return "inconclusive"


def is_nef_chain(st: SplittingType) -> bool:
    tws = [tw for tw, _ in st.parts]
    return all(nef_le(lo, hi) for hi, lo in zip(tws, tws[1:]))


def _require_window(window, degrees, margin):
    (k0, k1), (l0, l1) = window
    for k, l in degrees:
        if not (k0 <= k - margin and k + margin <= k1 and l0 <= l - margin and l + margin <= l1):
            raise WindowTooSmall(
                f"window {window} does not contain ({k}, {l}) with margin {margin}")


def check_splitting_hypothesis(X: ToricVariety, candidate: SplittingType,
                               table: CohomologyTable, margin: int = WINDOW_MARGIN) -> SplittingVerdict:
    """Compare ``table`` with the sum of the candidate's line-bundle tables.

    Each part O(b, c) is checked around (-b, -c), where its own table has its
    corner, so the window must contain those points with ``margin`` to spare.
    """
    _require_window(table.window, [(-b, -c) for (b, c), _ in candidate.parts], margin)
    expect = cohomology_table(X, candidate.sheaf(), table.window)
    bad = []
    for d in table.degrees():
        for i in range(X.dim + 1):
            u, v = table.get(i, d), expect.get(i, d)
            if u != v:
                bad.append((i, d, u, v))
    return SplittingVerdict(is_nef_chain(candidate), not bad, bad)


def recover_splitting_type(X: ToricVariety, h0: Callable, window) -> SplittingType:
    """Peel a line-bundle sum E off its H^0 function d -> h^0(E(d)).

    ``window`` = ((bmin, bmax), (cmin, cmax)) bounds the twists (b, c) of the
    parts.  Twists are visited by decreasing b + (a_s + 1) c; that functional
    is positive on every nonzero effective class, so all parts that can
    contribute sections at (-b, -c) are already known when (b, c) is reached.
    """
    (b0, b1), (c0, c1) = window
    cells = [(b, c) for b in range(b0, b1 + 1) for c in range(c0, c1 + 1)]
    w = X.a_s + 1
    cells.sort(key=lambda t: (t[0] + w * t[1], t[0]), reverse=True)
    found: dict = {}
    for b, c in cells:
        known = sum(mult * cohomology_dim(X, (bb - b, cc - c), 0)
                    for (bb, cc), mult in found.items())
        mult = h0((-b, -c)) - known
        if mult < 0:
            raise RecoveryFailed(f"negative multiplicity {mult} at ({b}, {c})")
        if mult:
            found[(b, c)] = mult
    for b, c in cells:
        got = sum(mult * cohomology_dim(X, (bb - b, cc - c), 0)
                  for (bb, cc), mult in found.items())
        if got != h0((-b, -c)):
            raise RecoveryFailed(f"recomposed h0 {got} != {h0((-b, -c))} at ({-b}, {-c})")
    return SplittingType(tuple(found.items()))


def h0_oracle(X: ToricVariety, F: SheafSpec) -> Callable:
    def h0(d):
        return sum(mult * cohomology_dim(X, _plus(tw, d), 0) for tw, mult in F.summands)
    return h0


# -- virtual resolutions -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VirtualResolutionResult:
    shift: tuple[int, int]
    complex: FreeComplex
    monad: Monad          # B(F(i, j)) before twisting back

    @property
    def length(self) -> int:
        ranks = self.complex.ranks()
        nz = [k for k, n in enumerate(ranks) if n]
        return nz[-1] if nz else 0


def acyclic_shift(X: ToricVariety, F: SheafSpec, R: DiagonalResolution, limit: int = 10_000):
    """First (i, j) >= 0 on the sweep i + j = 0, 1, ... making all F(i, j) (x) L_1 acyclic."""
    firsts = sorted({l1 for slot in _first_twists(R) for l1 in slot})
    for n in range(limit):
        for j in range(n + 1):
            i = n - j
            if all(is_acyclic(X, _plus(_plus(tw, (i, j)), l1))
                   for tw, _ in F.summands for l1 in firsts):
                return (i, j)
    raise RuntimeError("no acyclic shift found")   # unreachable for line-bundle sums


def virtual_resolution(X: ToricVariety, F: SheafSpec,
                       R: DiagonalResolution | None = None) -> VirtualResolutionResult:
    if not F:
        raise ValueError("F must be nonempty")
    R = R or build_R(X)
    i, j = acyclic_shift(X, F, R)
    monad = build_monad(X, F.twisted((i, j)), R)
    cx = monad.complex.twist((-i, -j))
    res = VirtualResolutionResult((i, j), cx, monad)
    assert res.length <= X.dim
    return res
