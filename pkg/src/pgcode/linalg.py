"""Gaussian elimination over GF(q) (small matrices) and GF(p) (large ones)."""

from __future__ import annotations

import numpy as np

from .gf import Field


def rref(rows, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with leading ones; zero rows dropped."""
    m = np.array(rows, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = field.mul(field.inv(int(m[r, c])), m[r])
        for j in range(nrows):
            if j != r and m[j, c]:
                m[j] = field.sub(m[j], field.mul(int(m[j, c]), m[r]))
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows, field: Field) -> int:
    if len(rows) == 0:
        return 0
    return len(rref(rows, field)[1])


def nullspace(rows, ncols: int, field: Field) -> np.ndarray:
    """Basis (in RREF) of {x : rows @ x = 0}."""
    if len(rows) == 0:
        return np.eye(ncols, dtype=np.int64)
    r, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(int(r[i, f]))
        basis.append(v)
    if not basis:
        return np.zeros((0, ncols), dtype=np.int64)
    return rref(basis, field)[0]


def rref_mod_p(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Vectorized RREF over the prime field F_p."""
    m = np.array(matrix, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * pow(int(m[r, c]), p - 2, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if len(nzr):
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace_mod_p(matrix: np.ndarray, p: int, ncols: int | None = None) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.int64)
    if ncols is None:
        ncols = matrix.shape[1]
    if matrix.size == 0:
        return np.eye(ncols, dtype=np.int64)
    r, pivots = rref_mod_p(matrix, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        out[k, pivots] = (-r[:, f]) % p
    if len(free) == 0:
        return out
    return rref_mod_p(out, p)[0]
