"""Brute-force reference checks over finite fields.

These deliberately avoid the rank formulation used by the checkers: they
list every central element and test membership by hashing matrices.
"""

from __future__ import annotations

import numpy as np

from .algebra import DEFAULT_BUDGET, MatAlgebra, coordinate_chunks
from .errors import BudgetExceeded
from .linalg import Mat, Subspace


def subspace_elements(space: Subspace, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Every element of a subspace over F_p, shape ``(p**dim, n, n)``."""
    p, n, d = space.field.p, space.n, space.dim
    if p**d > budget:
        raise BudgetExceeded(p**d, budget)
    if d == 0:
        return np.zeros((1, n, n), dtype=np.int64)
    flat = np.array(space.basis, dtype=np.int64)
    coords = np.concatenate(list(coordinate_chunks(p, d)))
    return (coords @ flat % p).reshape(-1, n, n)


def brute_element_passes(a: Mat, center_elems: np.ndarray, center_keys: set, p: int) -> bool:
    """Does some central x give a x central and nonzero?  (True also for central a.)"""
    am = np.array(a.rows, dtype=np.int64)
    if am.tobytes() in center_keys:
        return True
    prods = np.matmul(am[None, :, :], center_elems) % p
    for prod in prods:
        if prod.any() and prod.tobytes() in center_keys:
            return True
    return False


def center_index(alg: MatAlgebra, budget: int = DEFAULT_BUDGET) -> tuple[np.ndarray, set]:
    elems = subspace_elements(alg.center(), budget)
    return elems, {e.tobytes() for e in elems}


def center_is_reduced(alg: MatAlgebra, budget: int = DEFAULT_BUDGET) -> bool:
    """No nonzero central z with z^2 = 0, checked element by element."""
    p = alg.field.p
    elems = subspace_elements(alg.center(), budget)
    sq = np.matmul(elems, elems) % p
    nonzero = elems.reshape(elems.shape[0], -1).any(axis=1)
    square_zero = ~sq.reshape(sq.shape[0], -1).any(axis=1)
    return not bool((nonzero & square_zero).any())


def brute_rank(rows, p: int) -> int:
    """Rank over F_p by counting the distinct vectors in the row space."""
    rows = [tuple(int(x) % p for x in r) for r in rows]
    if not rows:
        return 0
    span = {tuple([0] * len(rows[0]))}
    for r in rows:
        span = {tuple((x + c * y) % p for x, y in zip(v, r)) for v in span for c in range(p)}
    size, k = len(span), 0
    while p**k < size:
        k += 1
    return k
