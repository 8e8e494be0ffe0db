"""Dense exact matrices, echelonised subspaces and nilpotent Jordan form.

Matrices are square and immutable.  A subspace of the n*n matrix space is
stored by the reduced row echelon form of its basis, flattened row-major
(entry ``(i, j)`` is coordinate ``i*n + j``), so two subspaces are equal
exactly when their stored bases are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import _fp
from .field import FieldSpec, Scalar

__all__ = [
    "Mat",
    "VectorSpace",
    "Subspace",
    "JordanData",
    "rref",
    "rank",
    "solve_kernel",
    "span_echelon",
    "subspace_ops",
    "nilpotent_jordan",
    "conjugate_subspace",
    "matrix_unit",
]


# ---------------------------------------------------------------------------
# row reduction


def _rref_python(rows: Sequence[Sequence], field: FieldSpec) -> tuple[list[list], list[int]]:
    red = field.reduce
    m = [[red(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        i = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if i is None:
            continue
        m[r], m[i] = m[i], m[r]
        inv = field.inv(m[r][c])
        prow = [red(x * inv) for x in m[r]]
        m[r] = prow
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [red(x - f * y) for x, y in zip(m[k], prow)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(rows: Sequence[Sequence], field: FieldSpec, ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of a list of raw-valued rows.

    Returns the nonzero rows and their pivot columns.
    """
    rows = list(rows)
    if not rows:
        return [], []
    if _fp.fast_ok(field):
        arr, piv = _fp.rref_mod_p(np.array(rows, dtype=np.int64), field.p)
        return [[int(x) for x in row] for row in arr], piv
    return _rref_python(rows, field)


def _rank_rational(rows: Sequence[Sequence]) -> int:
    # fraction-free elimination over Z after clearing denominators
    m = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        if any(ints):
            m.append(ints)
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        i = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if i is None:
            continue
        m[r], m[i] = m[i], m[r]
        piv = m[r]
        for k in range(r + 1, len(m)):
            f = m[k][c]
            if f:
                new = [piv[c] * x - f * y for x, y in zip(m[k], piv)]
                g = 0
                for x in new:
                    g = gcd(g, x)
                m[k] = [x // g for x in new] if g > 1 else new
        r += 1
        if r == len(m):
            break
    return r


def rank(rows: Sequence[Sequence], field: FieldSpec) -> int:
    rows = list(rows)
    if not rows:
        return 0
    if field.kind == "Q":
        return _rank_rational(rows)
    return len(rref(rows, field)[1])


def _kernel_basis(rows: Sequence[Sequence], ncols: int, field: FieldSpec) -> list[list]:
    """Canonical (RREF) basis of ``{v : M v = 0}``."""
    r, pivots = rref(rows, field) if rows else ([], [])
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    vecs = []
    for fcol in free:
        v = [field.zero] * ncols
        v[fcol] = field.one
        for row, pc in zip(r, pivots):
            v[pc] = field.reduce(-row[fcol])
        vecs.append(v)
    return rref(vecs, field)[0] if vecs else []


# ---------------------------------------------------------------------------
# matrices


class Mat:
    """An immutable n x n matrix over a :class:`FieldSpec`."""

    __slots__ = ("n", "field", "rows", "_hash")

    def __init__(self, rows: Iterable[Iterable], field: FieldSpec):
        rows = tuple(tuple(field.reduce(field.coerce(x)) for x in row) for row in rows)
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square with n >= 1")
        self.n = n
        self.field = field
        self.rows = rows
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, field: FieldSpec) -> "Mat":
        # trusted constructor: rows are already canonical raw values
        m = object.__new__(cls)
        m.n = len(rows)
        m.field = field
        m.rows = rows
        m._hash = None
        return m

    @classmethod
    def parse(cls, grid: Sequence[Sequence[str]], field: FieldSpec) -> "Mat":
        rows = tuple(tuple(field.parse(x) for x in row) for row in grid)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square with n >= 1")
        return cls._raw(rows, field)

    @classmethod
    def zero(cls, n: int, field: FieldSpec) -> "Mat":
        z = field.zero
        return cls._raw(tuple((z,) * n for _ in range(n)), field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "Mat":
        z, o = field.zero, field.one
        return cls._raw(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), field)

    @classmethod
    def from_flat(cls, vec: Sequence, n: int, field: FieldSpec) -> "Mat":
        vec = tuple(vec)
        return cls._raw(tuple(vec[i * n:(i + 1) * n] for i in range(n)), field)

    def flat(self) -> tuple:
        return tuple(x for row in self.rows for x in row)

    # -- access ----------------------------------------------------------
    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return Scalar(self.rows[i][j], self.field)

    def entry(self, i: int, j: int):
        """Raw entry at 1-based position (i, j), as in the E_ij notation."""
        return self.rows[i - 1][j - 1]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    # -- arithmetic ------------------------------------------------------
    def _check(self, other: "Mat"):
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.n != self.n or other.field != self.field:
            raise ValueError("matrix dimension or field mismatch")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        red, n = self.field.reduce, self.n
        rows = []
        # row-by-row accumulation skips zero entries; most matrices here are sparse
        for r in self.rows:
            acc = [0] * n
            for a, orow in zip(r, other.rows):
                if a:
                    for j, b in enumerate(orow):
                        if b:
                            acc[j] += a * b
            rows.append(tuple(red(x) for x in acc))
        return Mat._raw(tuple(rows), self.field)

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        red = self.field.reduce
        return Mat._raw(
            tuple(tuple(red(a + b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.field,
        )

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        red = self.field.reduce
        return Mat._raw(
            tuple(tuple(red(a - b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.field,
        )

    def __neg__(self) -> "Mat":
        red = self.field.reduce
        return Mat._raw(tuple(tuple(red(-a) for a in r) for r in self.rows), self.field)

    def scale(self, c) -> "Mat":
        c = self.field.coerce(c)
        red = self.field.reduce
        return Mat._raw(tuple(tuple(red(c * a) for a in r) for r in self.rows), self.field)

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Mat":
        if k < 0:
            return self.inverse() ** (-k)
        out = Mat.identity(self.n, self.field)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def commutator(self, other: "Mat") -> "Mat":
        return self @ other - other @ self

    def transpose(self) -> "Mat":
        return Mat._raw(tuple(zip(*self.rows)), self.field)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def is_upper_triangular(self, strict: bool = False) -> bool:
        off = 0 if strict else 1
        return all(self.rows[i][j] == 0 for i in range(self.n) for j in range(i + off))

    def diagonal(self) -> tuple:
        return tuple(self.rows[i][i] for i in range(self.n))

    def is_nilpotent(self) -> bool:
        return (self ** self.n).is_zero()

    def inverse(self) -> "Mat":
        n, f = self.n, self.field
        aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(self.rows)]
        r, piv = rref(aug, f)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("matrix is singular")
        return Mat._raw(tuple(tuple(row[n:]) for row in r), f)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Mat) and self.field == other.field and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Mat[{self.field.label}]({body})"

    def __reduce__(self):
        return (Mat._raw, (self.rows, self.field))


def matrix_unit(n: int, i: int, j: int, field: FieldSpec) -> Mat:
    """E_ij with 1-based indices."""
    z, o = field.zero, field.one
    return Mat._raw(
        tuple(tuple(o if (r, c) == (i - 1, j - 1) else z for c in range(n)) for r in range(n)), field
    )


# ---------------------------------------------------------------------------
# subspaces


class VectorSpace:
    """A subspace of F^length held by its canonical RREF basis."""

    __slots__ = ("field", "length", "basis", "pivots")

    def __init__(self, basis: Iterable[Sequence], field: FieldSpec, length: int, _canonical=False):
        if _canonical:
            rows, piv = [tuple(b) for b in basis], None
        else:
            rr, piv = rref(list(basis), field)
            rows = [tuple(r) for r in rr]
        if piv is None:
            piv = [next(i for i, x in enumerate(r) if x != 0) for r in rows]
        if any(len(r) != length for r in rows):
            raise ValueError("vector length mismatch")
        self.field = field
        self.length = length
        self.basis = tuple(rows)
        self.pivots = tuple(piv)

    def _new(self, basis, canonical=False):
        return VectorSpace(basis, self.field, self.length, _canonical=canonical)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def _compatible(self, other: "VectorSpace"):
        if self.field != other.field or self.length != other.length:
            raise ValueError("ambient mismatch between subspaces")

    def reduce(self, v: Sequence) -> list:
        """Remainder of v after reduction against the echelon basis."""
        red = self.field.reduce
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c != 0:
                v = [red(x - c * y) for x, y in zip(v, row)]
        return v

    def contains_vector(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def coords(self, v: Sequence) -> tuple:
        """Coordinates of a member in the echelon basis (entries at pivots)."""
        v = tuple(v)
        if not self.contains_vector(v):
            raise ValueError("vector is not in the subspace")
        return tuple(v[p] for p in self.pivots)

    def combine(self, coeffs: Sequence) -> tuple:
        red = self.field.reduce
        out = [self.field.zero] * self.length
        for c, row in zip(coeffs, self.basis):
            if c != 0:
                out = [red(x + c * y) for x, y in zip(out, row)]
        return tuple(out)

    def sum(self, other: "VectorSpace") -> "VectorSpace":
        self._compatible(other)
        return self._new(list(self.basis) + list(other.basis))

    __add__ = sum

    def intersection(self, other: "VectorSpace") -> "VectorSpace":
        self._compatible(other)
        if self.dim == 0 or other.dim == 0:
            return self._new([])
        # x in both  <=>  x = sum a_i u_i = sum b_j w_j
        f = self.field
        cols = list(self.basis) + [tuple(f.reduce(-x) for x in w) for w in other.basis]
        system = [list(r) for r in zip(*cols)]
        ker = _kernel_basis(system, len(cols), f)
        return self._new([self.combine(k[: self.dim]) for k in ker])

    __and__ = intersection

    def annihilator(self) -> "VectorSpace":
        """All u with u . v = 0 for every v in the space."""
        return self._new(_kernel_basis(list(self.basis), self.length, self.field), canonical=True)

    def is_subspace_of(self, other: "VectorSpace") -> bool:
        self._compatible(other)
        return all(other.contains_vector(b) for b in self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, VectorSpace)
            and self.field == other.field
            and self.length == other.length
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field, self.length, self.basis))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, length={self.length}, field={self.field.label})"


class Subspace(VectorSpace):
    """A subspace of the n x n matrix space."""

    __slots__ = ("n",)

    def __init__(self, basis: Iterable[Sequence], field: FieldSpec, n: int, _canonical=False):
        super().__init__(basis, field, n * n, _canonical=_canonical)
        self.n = n

    @classmethod
    def zero(cls, n: int, field: FieldSpec) -> "Subspace":
        return cls([], field, n)

    def _new(self, basis, canonical=False):
        return Subspace(basis, self.field, self.n, _canonical=canonical)

    @property
    def mats(self) -> list[Mat]:
        return [Mat.from_flat(b, self.n, self.field) for b in self.basis]

    def contains(self, m: Mat) -> bool:
        self._check_mat(m)
        return self.contains_vector(m.flat())

    __contains__ = contains

    def mat_coords(self, m: Mat) -> tuple:
        self._check_mat(m)
        return self.coords(m.flat())

    def element(self, coeffs: Sequence) -> Mat:
        coeffs = [self.field.coerce(c) for c in coeffs]
        return Mat.from_flat(self.combine(coeffs), self.n, self.field)

    def _check_mat(self, m: Mat):
        if m.n != self.n or m.field != self.field:
            raise ValueError("matrix does not live in this ambient space")


def solve_kernel(matrix: Sequence[Sequence], field: FieldSpec, ncols: int | None = None) -> VectorSpace:
    """Canonical basis of the null space ``{v : M v = 0}`` of a rectangular matrix."""
    rows = [[field.coerce(x) for x in row] for row in matrix]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    return VectorSpace(_kernel_basis(rows, ncols, field), field, ncols, _canonical=True)


def span_echelon(mats: Sequence[Mat], n: int | None = None, field: FieldSpec | None = None) -> Subspace:
    """Linear hull of a list of matrices, echelonised."""
    mats = list(mats)
    if mats:
        n = n if n is not None else mats[0].n
        field = field if field is not None else mats[0].field
    if n is None or field is None:
        raise ValueError("n and field are required for an empty span")
    for m in mats:
        if m.n != n or m.field != field:
            raise ValueError("mixed dimensions or fields in span")
    return Subspace([m.flat() for m in mats], field, n)


@dataclass(frozen=True)
class SubspaceOps:
    intersection: VectorSpace
    sum: VectorSpace
    equals: bool
    a_in_b: bool
    b_in_a: bool


def subspace_ops(a: VectorSpace, b: VectorSpace) -> SubspaceOps:
    """Intersection, sum, equality and inclusions of two subspaces."""
    a._compatible(b)
    return SubspaceOps(a & b, a + b, a == b, a.is_subspace_of(b), b.is_subspace_of(a))


# ---------------------------------------------------------------------------
# nilpotent Jordan form


@dataclass(frozen=True)
class JordanData:
    P: Mat
    partition: tuple[int, ...]
    J: Mat


def jordan_block_matrix(partition: Sequence[int], field: FieldSpec) -> Mat:
    """Block-diagonal nilpotent Jordan matrix with ones on the superdiagonal."""
    n = sum(partition)
    rows = [[field.zero] * n for _ in range(n)]
    start = 0
    for size in partition:
        for i in range(start, start + size - 1):
            rows[i][i + 1] = field.one
        start += size
    return Mat._raw(tuple(tuple(r) for r in rows), field)


def _apply(a: Mat, v: Sequence) -> tuple:
    red = a.field.reduce
    return tuple(red(sum(x * y for x, y in zip(row, v))) for row in a.rows)


def nilpotent_jordan(a: Mat) -> JordanData:
    """Chain-basis Jordan form of a nilpotent matrix.

    Returns P with ``P^-1 A P = J`` where J is the nilpotent Jordan matrix
    of ``partition`` (blocks in weakly decreasing order).
    """
    n, f = a.n, a.field
    if not a.is_nilpotent():
        raise ValueError("matrix is not nilpotent")
    # kernels of A^0, A^1, ..., A^m with A^m = 0
    kernels = [VectorSpace([], f, n)]
    power = Mat.identity(n, f)
    while kernels[-1].dim < n:
        power = power @ a
        kernels.append(solve_kernel(power.rows, f))
    m = len(kernels) - 1

    tops: list[tuple[int, tuple]] = []
    for k in range(m, 0, -1):
        # K_{k-1} plus the level-k images of the longer chains
        span = [tuple(b) for b in kernels[k - 1].basis]
        for size, v in tops:
            w = v
            for _ in range(size - k):
                w = _apply(a, w)
            span.append(w)
        current = VectorSpace(span, f, n)
        for cand in kernels[k].basis:
            if not current.contains_vector(cand):
                tops.append((k, cand))
                current = current + VectorSpace([cand], f, n)

    columns: list[tuple] = []
    partition = []
    for size, v in tops:
        chain = [v]
        for _ in range(size - 1):
            chain.append(_apply(a, chain[-1]))
        columns.extend(reversed(chain))
        partition.append(size)
    p = Mat._raw(tuple(zip(*columns)), f)
    j = jordan_block_matrix(partition, f)
    if p @ j != a @ p:
        raise AssertionError("chain basis does not conjugate A to Jordan form")
    return JordanData(P=p, partition=tuple(partition), J=j)


def partition_from_kernels(a: Mat) -> tuple[int, ...]:
    """Jordan partition of a nilpotent matrix from the ranks of its powers."""
    n = a.n
    dims = [0]
    power = Mat.identity(n, a.field)
    while dims[-1] < n:
        power = power @ a
        dims.append(n - rank(power.rows, a.field))
        if len(dims) > n + 1:
            raise ValueError("matrix is not nilpotent")
    # number of blocks of size >= k is dims[k] - dims[k-1]
    at_least = [dims[k] - dims[k - 1] for k in range(1, len(dims))]
    parts = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        parts.extend([k] * exact)
    return tuple(parts)


def conjugate_subspace(s: Subspace, p: Mat) -> Subspace:
    """The subspace ``{P^-1 B P : B in s}``."""
    if p.n != s.n or p.field != s.field:
        raise ValueError("conjugating matrix does not match the subspace")
    pinv = p.inverse()
    return span_echelon([pinv @ b @ p for b in s.mats], n=s.n, field=s.field)
