"""Shared fixtures: the variety grid used across the suite."""
from itertools import combinations_with_replacement

from toricdiag.toric import build_variety


def grid(max_dim: int = 4, a_max: int = 3):
    """All X(r; a) with r, s in 1..3, r + s <= max_dim, a weakly increasing in [0, a_max]."""
    out = []
    for r in (1, 2, 3):
        for s in (1, 2, 3):
            if r + s > max_dim:
                continue
            for a in combinations_with_replacement(range(a_max + 1), s):
                out.append(build_variety(r, a))
    return out


def ids(varieties):
    return [X.name for X in varieties]


# acceptance lines collected during the run, printed by the conftest summary hook
ACCEPTANCE: dict[int, str] = {}


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[n] = line
    print(line, flush=True)
