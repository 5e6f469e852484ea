"""Exact linear algebra over F_p on small dense int64 matrices.

Pivoting is deterministic: columns are scanned left to right and the pivot
row is the lowest-index remaining row with a nonzero entry.  That keeps
every derived basis (and hence every Betti table) reproducible.
"""
from __future__ import annotations

import numpy as np


def as_matrix(a, ncols: int | None = None) -> np.ndarray:
    m = np.asarray(a, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1) if m.size else np.zeros((0, ncols or 0), dtype=np.int64)
    return m


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """a @ b mod p; float64 products are exact while the sums stay below 2^53."""
    if a.shape[1] and (p - 1) ** 2 * a.shape[1] < 2 ** 52:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
    return (a @ b) % p


def _gauss_jordan(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (nonzero rows, pivot columns).

    Tall inputs are absorbed in blocks: each block is reduced against the
    echelon basis found so far and only its residue is eliminated.  The
    reduced echelon form of a row space is unique, so this does not change
    the result.
    """
    m = np.array(a, dtype=np.int64, copy=True) % p
    if m.ndim != 2:
        raise ValueError("rref expects a 2d matrix")
    nrows, ncols = m.shape
    block = max(2 * ncols, 64)
    if nrows <= block:
        return _gauss_jordan(m, p)
    rows, pivots = _gauss_jordan(m[:block], p)
    for start in range(block, nrows, block):
        chunk = m[start:start + block]
        if pivots:
            chunk = (chunk - matmul(chunk[:, pivots], rows, p)) % p
        chunk = chunk[np.any(chunk, axis=1)]
        if chunk.shape[0]:
            rows, pivots = _gauss_jordan(np.vstack([rows, chunk]), p)
        if len(pivots) == ncols:
            break
    return rows, pivots


def rank(a, p: int) -> int:
    a = as_matrix(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Rows spanning {x : a @ x = 0} mod p."""
    a = as_matrix(a)
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    r, piv = rref(a, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, c in enumerate(piv):
            out[k, c] = (-r[i, f]) % p
    return out


class Subspace:
    """Row space of a matrix mod p, kept in reduced echelon form.

    Because the basis is reduced, the coordinates of a vector lying in the
    span are simply its entries at the pivot columns.
    """

    __slots__ = ("n", "p", "rows", "pivots", "_nonpivots")

    def __init__(self, n: int, p: int, rows=None, *, reduced: bool = False):
        self.n = n
        self.p = p
        if rows is None or len(rows) == 0 or n == 0:
            self.rows = np.zeros((0, n), dtype=np.int64)
            self.pivots: list[int] = []
        elif reduced:
            self.rows, self.pivots = rows[0], rows[1]
        else:
            self.rows, self.pivots = rref(as_matrix(rows, n).reshape(-1, n), p)
        piv = set(self.pivots)
        self._nonpivots = [c for c in range(n) if c not in piv]

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        return cls(n, p, (np.eye(n, dtype=np.int64), list(range(n))), reduced=True)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def codim(self) -> int:
        return self.n - len(self.pivots)

    @property
    def nonpivots(self) -> list[int]:
        return self._nonpivots

    def reduce(self, vecs) -> np.ndarray:
        """Residues of the rows of ``vecs`` modulo the subspace."""
        v = as_matrix(vecs, self.n) % self.p
        if not self.pivots or v.shape[0] == 0:
            return v
        return (v - matmul(v[:, self.pivots], self.rows, self.p)) % self.p

    def contains(self, vecs) -> bool:
        return not np.any(self.reduce(vecs))

    def coords(self, vecs) -> np.ndarray:
        """Coordinates (w.r.t. the reduced basis) of vectors in the span."""
        v = as_matrix(vecs, self.n) % self.p
        return v[:, self.pivots]

    def quotient_coords(self, vecs) -> np.ndarray:
        """Images in the quotient, in the basis of non-pivot unit vectors."""
        return self.reduce(vecs)[:, self._nonpivots]

    def complement_basis(self) -> np.ndarray:
        out = np.zeros((len(self._nonpivots), self.n), dtype=np.int64)
        for k, c in enumerate(self._nonpivots):
            out[k, c] = 1
        return out

    def __add__(self, other: "Subspace") -> "Subspace":
        if not other.pivots:
            return self
        if not self.pivots:
            return other
        return Subspace(self.n, self.p, np.vstack([self.rows, other.rows]))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.n}, p={self.p})"
