"""Matrix algebras: closure, center, centralizers, powers, idempotents.

A :class:`MatAlgebra` is a multiplication-closed :class:`Subspace`.  Its
elements are addressed either as matrices or as coordinate vectors in the
canonical echelon basis of the subspace.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _fp
from .errors import BudgetExceeded, NotClosedError, NotLocalError, NotNilpotentError
from .field import FieldSpec, Scalar
from .linalg import Mat, Subspace, VectorSpace, rref, solve_kernel, span_echelon

__all__ = [
    "DEFAULT_BUDGET",
    "MatAlgebra",
    "PowerChain",
    "NilIndex",
    "Commutativity",
    "LocalSplit",
    "close_under_multiplication",
    "center",
    "centralizer",
    "power_chain",
    "nil_index",
    "element_nilpotence_index",
    "is_commutative",
    "local_split",
    "adjoin_identity",
    "enumerate_idempotents",
    "enumeration_size",
    "coordinate_chunks",
]

DEFAULT_BUDGET = 3**12
CHUNK = 1 << 13
RATIONAL_POOL = range(-3, 4)


class MatAlgebra:
    """A subspace of n x n matrices closed under multiplication.

    Closure is verified on construction (``check=False`` skips it for
    trusted callers).  The center is computed lazily and cached once.
    """

    def __init__(self, space: Subspace, name: str | None = None, check: bool = True):
        self.space = space
        self.name = name
        self._tensor = None
        self._tensor_np = None
        self._basis_np = None
        self._center = None
        self._lock = threading.Lock()
        if check:
            self.structure_tensor()

    # -- basic data -----------------------------------------------------
    @property
    def n(self) -> int:
        return self.space.n

    @property
    def field(self) -> FieldSpec:
        return self.space.field

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> list[Mat]:
        return self.space.mats

    @property
    def fast(self) -> bool:
        return _fp.fast_ok(self.field)

    def __contains__(self, m: Mat) -> bool:
        return self.space.contains(m)

    def coords(self, m: Mat) -> tuple:
        return self.space.mat_coords(m)

    def element(self, coeffs: Sequence) -> Mat:
        return self.space.element(coeffs)

    @property
    def contains_identity(self) -> bool:
        return Mat.identity(self.n, self.field) in self

    @property
    def is_unital(self) -> bool:
        """Whether some element of the algebra is a two-sided identity."""
        return self.identity_element() is not None

    def identity_element(self) -> Mat | None:
        d, f = self.dim, self.field
        if d == 0:
            return None
        t = self.structure_tensor()
        # sum_i e_i (B_i B_j) = B_j and sum_i e_i (B_j B_i) = B_j, for all j;
        # unknowns e_0..e_{d-1} plus a homogenising coordinate
        rows = []
        for j in range(d):
            for c in range(d):
                target = f.one if c == j else f.zero
                rows.append([t[i][j][c] for i in range(d)] + [f.reduce(-target)])
                rows.append([t[j][i][c] for i in range(d)] + [f.reduce(-target)])
        ker = solve_kernel(rows, f, d + 1)
        sol = next((v for v in ker.basis if v[d] != 0), None)
        if sol is None:
            return None
        scale = f.inv(sol[d])
        return self.element([f.reduce(x * scale) for x in sol[:d]])

    def basis_array(self) -> np.ndarray:
        if self._basis_np is None:
            self._basis_np = np.array(self.space.basis, dtype=np.int64).reshape(self.dim, self.n, self.n)
        return self._basis_np

    def structure_tensor(self) -> list:
        """``t[i][j]`` is the coordinate vector of ``B_i @ B_j``."""
        if self._tensor is not None:
            return self._tensor
        d, n = self.dim, self.n
        if d == 0:
            self._tensor = []
            return self._tensor
        if self.fast:
            p = self.field.p
            b = self.basis_array()
            prods = np.einsum("aij,bjk->abik", b, b).reshape(d * d, n * n) % p
            flat = np.array(self.space.basis, dtype=np.int64)
            co = prods[:, list(self.space.pivots)]
            resid = (prods - co @ flat) % p
            bad = np.flatnonzero(resid.any(axis=1))
            if bad.size:
                i, j = divmod(int(bad[0]), d)
                raise NotClosedError(f"product of basis elements {i} and {j} leaves the span")
            self._tensor_np = co.reshape(d, d, d)
            self._tensor = [[tuple(int(x) for x in co[i * d + j]) for j in range(d)] for i in range(d)]
        else:
            mats = self.basis
            tensor = []
            for i, bi in enumerate(mats):
                row = []
                for j, bj in enumerate(mats):
                    v = (bi @ bj).flat()
                    if not self.space.contains_vector(v):
                        raise NotClosedError(f"product of basis elements {i} and {j} leaves the span")
                    row.append(tuple(v[q] for q in self.space.pivots))
                tensor.append(row)
            self._tensor = tensor
        return self._tensor

    def tensor_array(self) -> np.ndarray:
        if self._tensor_np is None:
            self.structure_tensor()
            if self._tensor_np is None:
                self._tensor_np = np.array(self._tensor, dtype=np.int64).reshape(self.dim, self.dim, self.dim)
        return self._tensor_np

    def center(self, fresh: bool = False) -> Subspace:
        if fresh:
            return _center_from_matrices(self)
        if self._center is None:
            with self._lock:
                if self._center is None:
                    self._center = _center_from_tensor(self)
        return self._center

    def __eq__(self, other):
        return isinstance(other, MatAlgebra) and self.space == other.space

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"MatAlgebra({label.strip() or 'algebra'}, n={self.n}, dim={self.dim}, field={self.field.label})"

    def __getstate__(self):
        return {"space": self.space, "name": self.name}

    def __setstate__(self, state):
        self.__init__(state["space"], state["name"], check=False)


def _assert_closed(space: Subspace):
    MatAlgebra(space, check=True)


def _center_from_tensor(a: MatAlgebra) -> Subspace:
    d, f = a.dim, a.field
    if d == 0:
        return Subspace.zero(a.n, f)
    t = a.structure_tensor()
    rows = []
    for j in range(d):
        for c in range(d):
            rows.append([f.reduce(t[i][j][c] - t[j][i][c]) for i in range(d)])
    ker = solve_kernel(rows, f, d)
    z = Subspace([a.space.combine(v) for v in ker.basis], f, a.n)
    _assert_closed(z)
    return z


def _center_from_matrices(a: MatAlgebra) -> Subspace:
    # independent of the structure tensor: commutators as full matrices
    z = centralizer_of_set(a.basis, a.space)
    _assert_closed(z)
    return z


def center(a: MatAlgebra) -> Subspace:
    return a.center()


def centralizer_of_set(mats: Sequence[Mat], within: Subspace) -> Subspace:
    f = within.field
    if within.dim == 0:
        return Subspace.zero(within.n, f)
    w = within.mats
    cols = []
    for wi in w:
        col = []
        for m in mats:
            col.extend((wi @ m - m @ wi).flat())
        cols.append(col)
    if not mats:
        return within
    rows = [list(r) for r in zip(*cols)]
    ker = solve_kernel(rows, f, within.dim)
    return Subspace([within.combine(v) for v in ker.basis], f, within.n)


def centralizer(m: Mat, within: Subspace) -> Subspace:
    """``{x in within : x m = m x}``."""
    if m.n != within.n or m.field != within.field:
        raise ValueError("matrix and subspace live in different ambients")
    return centralizer_of_set([m], within)


# ---------------------------------------------------------------------------
# closure


def close_under_multiplication(
    generators: Sequence[Mat],
    n: int | None = None,
    field: FieldSpec | None = None,
    max_dim: int | None = None,
    name: str | None = None,
) -> MatAlgebra:
    """Smallest multiplication-closed subspace containing the generators.

    No identity is adjoined.  ``max_dim`` lets callers that know an ambient
    algebra stop as soon as the closure fills it.
    """
    gens = list(generators)
    if gens:
        n = gens[0].n
        field = gens[0].field
    if n is None or field is None:
        raise ValueError("n and field are required without generators")
    for g in gens:
        if g.n != n or g.field != field:
            raise ValueError("generators have mixed dimensions or fields")
    if max_dim is None:
        max_dim = n * n
    if _fp.fast_ok(field):
        space = _close_fast(gens, n, field, max_dim)
    else:
        space = _close_python(gens, n, field, max_dim)
    return MatAlgebra(space, name=name)


def _close_fast(gens, n, field, max_dim) -> Subspace:
    p = field.p
    if not gens:
        return Subspace.zero(n, field)
    s, piv = _fp.rref_mod_p(np.array([g.flat() for g in gens], dtype=np.int64), p)
    while 0 < s.shape[0] < max_dim:
        d = s.shape[0]
        b = s.reshape(d, n, n)
        prods = np.einsum("aij,bjk->abik", b, b).reshape(d * d, n * n) % p
        nxt, piv = _fp.rref_mod_p(np.vstack([s, prods]), p)
        if nxt.shape[0] == d:
            break
        s = nxt
    return Subspace([tuple(int(x) for x in row) for row in s], field, n, _canonical=True)


def _close_python(gens, n, field, max_dim) -> Subspace:
    space = VectorSpace([], field, n * n)
    added: list[Mat] = []
    queue = list(gens)
    while queue and space.dim < max_dim:
        g = queue.pop(0)
        if space.contains_vector(g.flat()):
            continue
        space = space + VectorSpace([g.flat()], field, n * n)
        added.append(g)
        for h in added:
            queue.append(g @ h)
            if h is not g:
                queue.append(h @ g)
    return Subspace(space.basis, field, n, _canonical=True)


# ---------------------------------------------------------------------------
# powers and nilpotence


@dataclass(frozen=True)
class PowerChain:
    terms: tuple[Subspace, ...]
    nilpotence_index: int | None

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(t.dim for t in self.terms)


def _products_span(left: Subspace, right: Subspace) -> Subspace:
    n, f = left.n, left.field
    if left.dim == 0 or right.dim == 0:
        return Subspace.zero(n, f)
    if _fp.fast_ok(f):
        p = f.p
        x = np.array(left.basis, dtype=np.int64).reshape(-1, n, n)
        y = np.array(right.basis, dtype=np.int64).reshape(-1, n, n)
        prods = np.einsum("aij,bjk->abik", x, y).reshape(-1, n * n) % p
        s, _ = _fp.rref_mod_p(prods, p)
        return Subspace([tuple(int(v) for v in row) for row in s], f, n, _canonical=True)
    return span_echelon([u @ v for u in left.mats for v in right.mats], n=n, field=f)


def power_chain(a: MatAlgebra) -> PowerChain:
    """The chain A >= A^2 >= ... and the nilpotence index (None if infinite)."""
    terms = [a.space]
    while True:
        if terms[-1].dim == 0:
            return PowerChain(tuple(terms), len(terms))
        nxt = _products_span(terms[-1], a.space)
        if nxt == terms[-1]:
            return PowerChain(tuple(terms), None)
        terms.append(nxt)


def element_nilpotence_index(m: Mat) -> int | None:
    """Least k with m^k = 0, or None when m is not nilpotent."""
    power = m
    for k in range(1, m.n + 1):
        if power.is_zero():
            return k
        power = power @ m
    return None


@dataclass(frozen=True)
class NilIndex:
    value: int
    certainty: str  # "exact" or "probabilistic"
    examined: int


def enumeration_size(a: MatAlgebra) -> int:
    if not a.field.is_finite:
        raise ValueError(f"cannot enumerate an algebra over the infinite field {a.field}")
    return a.field.p ** a.dim


def _check_budget(a: MatAlgebra, budget: int) -> int:
    size = enumeration_size(a)
    if size > budget:
        raise BudgetExceeded(size, budget)
    if not a.fast:
        raise ValueError(f"exhaustive enumeration needs p < {_fp.FAST_PRIME_LIMIT}")
    return size


def coordinate_chunks(p: int, d: int, normalized: bool = False, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Coordinate vectors of F_p^d in odometer order.

    With ``normalized`` only nonzero vectors whose first nonzero coordinate
    is 1 are produced (one representative per line through the origin).
    """
    total = p**d
    for start in range(0, total, chunk):
        c = _fp.odometer(p, d, start, min(total, start + chunk))
        if normalized:
            c = c[_fp.normalized_mask(c)]
        if c.shape[0]:
            yield c


def _element_arrays(a: MatAlgebra, coords: np.ndarray) -> np.ndarray:
    n, p = a.n, a.field.p
    flat = np.array(a.space.basis, dtype=np.int64)
    return (coords @ flat % p).reshape(-1, n, n)


def nil_index(
    a: MatAlgebra,
    strategy: str = "exhaustive",
    samples: int = 1000,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> NilIndex:
    """Maximal nilpotence index of the elements of a nil-algebra."""
    if power_chain(a).nilpotence_index is None:
        raise NotNilpotentError("algebra is not nilpotent")
    if a.dim == 0:
        return NilIndex(1, "exact", 0)
    if strategy == "exhaustive":
        _check_budget(a, budget)
        p, n = a.field.p, a.n
        best, examined = 1, 0
        for coords in coordinate_chunks(p, a.dim, normalized=True):
            m = _element_arrays(a, coords)
            examined += m.shape[0]
            power = m
            k = 1
            alive = power.reshape(power.shape[0], -1).any(axis=1)
            while alive.any():
                if k > n:
                    raise NotNilpotentError("non-nilpotent element found")
                power = np.matmul(power, m) % p
                k += 1
                alive = power.reshape(power.shape[0], -1).any(axis=1)
            best = max(best, k)
        return NilIndex(best, "exact", examined)
    if strategy == "randomized":
        rng = random.Random(seed)
        f = a.field
        best = 1
        for _ in range(samples):
            m = a.element(random_coords(rng, f, a.dim))
            k = element_nilpotence_index(m)
            if k is None:
                raise NotNilpotentError("non-nilpotent element found")
            best = max(best, k)
        return NilIndex(best, "probabilistic", samples)
    raise ValueError(f"unknown strategy {strategy!r}")


def random_coords(rng: random.Random, field: FieldSpec, d: int) -> list:
    if field.is_finite:
        return [rng.randrange(field.p) for _ in range(d)]
    return [field.coerce(rng.choice(RATIONAL_POOL)) for _ in range(d)]


# ---------------------------------------------------------------------------
# commutativity, localness, idempotents


@dataclass(frozen=True)
class Commutativity:
    commutative: bool
    witness: tuple[Mat, Mat] | None = None

    def __bool__(self):
        return self.commutative


def is_commutative(a: MatAlgebra) -> Commutativity:
    t = a.structure_tensor()
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            if t[i][j] != t[j][i]:
                b = a.basis
                return Commutativity(False, (b[i], b[j]))
    return Commutativity(True)


@dataclass(frozen=True)
class LocalSplit:
    scalar_part: Subspace
    radical: MatAlgebra
    lambda_functional: Callable[[Mat], Scalar]


def local_split(a: MatAlgebra) -> LocalSplit:
    """Split a unital constant-diagonal algebra as F*E_n plus its radical."""
    n, f = a.n, a.field
    ident = Mat.identity(n, f)
    if ident not in a:
        raise NotLocalError("algebra does not contain the identity matrix")
    gens = []
    for b in a.basis:
        diag = b.diagonal()
        if any(x != diag[0] for x in diag):
            raise NotLocalError(f"basis element with non-constant diagonal: {b!r}")
        gens.append(b - ident.scale(diag[0]))
    try:
        radical = MatAlgebra(span_echelon(gens, n=n, field=f), name="radical")
    except NotClosedError as exc:
        raise NotLocalError("zero-diagonal part is not a subalgebra") from exc
    if power_chain(radical).nilpotence_index is None:
        raise NotLocalError("zero-diagonal part is not nilpotent")
    scalar = span_echelon([ident])

    def read_lambda(m: Mat) -> Scalar:
        if m not in a:
            raise ValueError("matrix is not in the algebra")
        return Scalar(m.rows[0][0], f)

    return LocalSplit(scalar, radical, read_lambda)


def adjoin_identity(nil: MatAlgebra) -> MatAlgebra:
    """The local algebra F*E_n + N for a nilpotent algebra N."""
    if power_chain(nil).nilpotence_index is None:
        raise NotNilpotentError("algebra is not nilpotent")
    ident = Mat.identity(nil.n, nil.field)
    if ident in nil:
        raise ValueError("algebra already contains the identity")
    name = f"unital({nil.name})" if nil.name else None
    return MatAlgebra(span_echelon(nil.basis + [ident], n=nil.n, field=nil.field), name=name)


def enumerate_idempotents(a: MatAlgebra, budget: int = DEFAULT_BUDGET) -> list[Mat]:
    """All e in the algebra with e^2 = e, in odometer order."""
    _check_budget(a, budget)
    if a.dim == 0:
        return [Mat.zero(a.n, a.field)]
    p = a.field.p
    out = []
    for coords in coordinate_chunks(p, a.dim):
        m = _element_arrays(a, coords)
        sq = np.matmul(m, m) % p
        hits = np.flatnonzero((sq == m).reshape(m.shape[0], -1).all(axis=1))
        for h in hits:
            out.append(a.element([int(x) for x in coords[h]]))
    return out
