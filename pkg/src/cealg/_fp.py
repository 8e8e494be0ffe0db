"""Vectorised mod-p kernels used on the hot paths for prime fields.

Every routine here has a pure-Python counterpart in :mod:`cealg.linalg`;
the test-suite checks they agree.  Values are ``int64`` residues and
``p < FAST_PRIME_LIMIT`` keeps every intermediate product and every
short dot product inside 63 bits.
"""

from __future__ import annotations

import numpy as np

FAST_PRIME_LIMIT = 2**20


def fast_ok(field) -> bool:
    return field.kind == "Fp" and field.p < FAST_PRIME_LIMIT


def inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        table[x] = pow(x, -1, p)
    return table


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a 2-d array over F_p."""
    m = np.array(a, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        f = m[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            m[rows] = (m[rows] - f[rows, None] * m[r]) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def batched_rank_mod_p(a: np.ndarray, p: int, inv: np.ndarray | None = None) -> np.ndarray:
    """Rank of each matrix in a stack of shape ``(batch, rows, cols)``."""
    m = np.array(a, dtype=np.int64) % p
    batch, nrows, ncols = m.shape
    rank = np.zeros(batch, dtype=np.int64)
    if batch == 0 or nrows == 0 or ncols == 0:
        return rank
    if inv is None:
        inv = inverse_table(p)
    row_ids = np.arange(nrows)
    for c in range(ncols):
        cand = (m[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.flatnonzero(has)
        piv = cand[b].argmax(axis=1)
        r = rank[b]
        top = m[b, r].copy()
        m[b, r] = m[b, piv]
        m[b, piv] = top
        prow = m[b, r] * inv[m[b, r, c]][:, None] % p
        m[b, r] = prow
        f = m[b, :, c].copy()
        f[np.arange(b.size), r] = 0
        m[b] = (m[b] - f[:, :, None] * prow[:, None, :]) % p
        rank[b] += 1
    return rank


def odometer(p: int, d: int, start: int, stop: int) -> np.ndarray:
    """Coordinate vectors with indices ``start..stop-1`` in base-p odometer order.

    The first coordinate is the most significant digit, matching
    ``itertools.product(range(p), repeat=d)``.
    """
    t = np.arange(start, stop, dtype=np.int64)
    out = np.empty((t.size, d), dtype=np.int64)
    for j in range(d - 1, -1, -1):
        out[:, j] = t % p
        t //= p
    return out


def normalized_mask(coords: np.ndarray) -> np.ndarray:
    """Rows that are nonzero with leading nonzero coordinate equal to 1."""
    nz = coords != 0
    anynz = nz.any(axis=1)
    lead = coords[np.arange(coords.shape[0]), nz.argmax(axis=1)]
    return anynz & (lead == 1)


def matmul_mod_p(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.matmul(a, b) % p
