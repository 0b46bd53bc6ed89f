"""Exact rank of scalar matrices over Q or F_p."""
from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

DEFAULT_PRIME = 32003

# Generator-count threshold below which Q is the default field.
SMALL_STRAND = 200


class ScalarMatrix:
    """Sparse matrix stored as {row: {col: value}}."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: dict[int, dict[int, object]] = rows if rows is not None else {}

    @classmethod
    def from_dense(cls, mat) -> "ScalarMatrix":
        mat = [list(row) for row in mat]
        nrows = len(mat)
        ncols = len(mat[0]) if nrows else 0
        rows = {}
        for i, row in enumerate(mat):
            d = {j: v for j, v in enumerate(row) if v != 0}
            if d:
                rows[i] = d
        return cls(nrows, ncols, rows)

    def add(self, i: int, j: int, v) -> None:
        row = self.rows.setdefault(i, {})
        new = row.get(j, 0) + v
        if new == 0:
            row.pop(j, None)
            if not row:
                del self.rows[i]
        else:
            row[j] = new

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def transpose(self) -> "ScalarMatrix":
        t = ScalarMatrix(self.ncols, self.nrows)
        for i, row in self.rows.items():
            for j, v in row.items():
                t.rows.setdefault(j, {})[i] = v
        return t

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        assert self.ncols == other.nrows
        out = ScalarMatrix(self.nrows, other.ncols)
        for i, row in self.rows.items():
            acc: dict[int, object] = {}
            for k, v in row.items():
                orow = other.rows.get(k)
                if orow:
                    for j, w in orow.items():
                        acc[j] = acc.get(j, 0) + v * w
            acc = {j: v for j, v in acc.items() if v != 0}
            if acc:
                out.rows[i] = acc
        return out

    def is_zero(self, prime: int | None = None) -> bool:
        for row in self.rows.values():
            for v in row.values():
                if (v % prime if prime else v) != 0:
                    return False
        return True


def _as_sparse(mat) -> ScalarMatrix:
    if isinstance(mat, ScalarMatrix):
        return mat
    if isinstance(mat, np.ndarray):
        mat = mat.tolist()
    return ScalarMatrix.from_dense(mat)


def _to_mod_p(v, p: int) -> int:
    if type(v) is int:
        return v % p
    if isinstance(v, Fraction):
        return v.numerator % p * pow(v.denominator % p, -1, p) % p
    return int(v) % p


def rank_mod_p(mat, p: int = DEFAULT_PRIME) -> int:
    """Rank over F_p by sparse incremental row echelon reduction."""
    M = _as_sparse(mat)
    if M.nrows > M.ncols:
        M = M.transpose()
    rows = []
    for row in M.rows.values():
        r = {}
        for j, v in row.items():
            v = _to_mod_p(v, p)
            if v:
                r[j] = v
        if r:
            rows.append(r)
    rows.sort(key=len)
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {j: v * inv % p for j, v in row.items()}
                break
            f = row[c]
            for j, v in piv.items():
                nv = (row.get(j, 0) - f * v) % p
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
    return len(pivots)


def rank_rational(mat) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    M = _as_sparse(mat)
    dense = []
    for row in M.rows.values():
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        r = [0] * M.ncols
        for j, v in row.items():
            r[j] = int(v * den)
        dense.append(r)
    if not dense:
        return 0
    A = dense
    m, n = len(A), M.ncols
    rank = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(rank, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pr = A[rank]
        pv = pr[c]
        for i in range(rank + 1, m):
            row = A[i]
            f = row[c]
            if f == 0:
                if pv != prev:
                    A[i] = [x * pv // prev for x in row]
                continue
            A[i] = [(pv * row[j] - f * pr[j]) // prev for j in range(n)]
        prev = pv
        rank += 1
        if rank == m:
            break
    return rank


def scalar_rank(mat, prime: int | None = None) -> int:
    """Exact rank; prime=None means the rationals."""
    if prime is None:
        return rank_rational(mat)
    return rank_mod_p(mat, prime)
