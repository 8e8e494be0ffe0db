"""Builders for the concrete algebras studied here.

Matrix positions follow the E_ij convention: 1-based (row, column).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .algebra import MatAlgebra
from .ce import SoSCertificate
from .field import FieldSpec
from .linalg import Mat, Subspace, matrix_unit, span_echelon

__all__ = [
    "FAMILIES",
    "FamilySpec",
    "build",
    "build_standard",
    "build_theorem_1_2",
    "build_example_4_1",
    "build_prop32_forms",
    "build_exterior_regular",
    "build_q8_group_algebra",
    "build_jordan_nilpotent",
    "theorem_1_2_certificate",
    "Q8_ELEMENTS",
    "Q8_TABLE",
]


def _pattern(n: int, field: FieldSpec, positions) -> Mat:
    """Sum of the matrix units at the given 1-based positions."""
    rows = [[field.zero] * n for _ in range(n)]
    for i, j in positions:
        rows[i - 1][j - 1] = field.reduce(rows[i - 1][j - 1] + 1)
    return Mat._raw(tuple(tuple(r) for r in rows), field)


def build_standard(family: str, n: int, field: FieldSpec) -> MatAlgebra:
    """M_n, T_n or N_n: full, upper triangular, strictly upper triangular."""
    if n < 1:
        raise ValueError("n must be positive")
    family = family.lower()
    if family in ("full", "fullmatrix", "m"):
        cells, name = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)], f"M{n}"
    elif family in ("upper", "uppertriangular", "t"):
        cells, name = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)], f"T{n}"
    elif family in ("strict", "strictlyupper", "n"):
        cells, name = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)], f"N{n}"
    else:
        raise ValueError(f"unknown standard family {family!r}")
    basis = [matrix_unit(n, i, j, field) for i, j in cells]
    return MatAlgebra(span_echelon(basis, n=n, field=field), name=f"{name}({field.label})")


def theorem_1_2_generators(n: int, field: FieldSpec) -> list[Mat]:
    """One matrix per free parameter a_12, ..., a_1n (in that order)."""
    if n < 7:
        raise ValueError(f"the family needs n >= 7, got {n}")
    gens = []
    for j in range(2, n + 1):
        cells = [(1, j)]
        if j == 2:
            cells.append((n - 2, n))
        elif j == 3:
            cells += [(2, 4), (n - 1, n)]
        elif j == n - 2:
            cells.append((2, n))
        elif j == n - 1:
            cells.append((3, n))
        gens.append(_pattern(n, field, cells))
    return gens


def build_theorem_1_2(n: int, field: FieldSpec) -> MatAlgebra:
    """The (n-1)-dimensional non-commutative subalgebra of N_n, n >= 7.

    Row 1 carries the free parameters a_12..a_1n; a_13 is repeated at
    (2,4) and (n-1,n), a_12 at (n-2,n), a_1,n-2 at (2,n) and a_1,n-1 at
    (3,n).
    """
    gens = theorem_1_2_generators(n, field)
    return MatAlgebra(span_echelon(gens), name=f"thm12_n{n}({field.label})")


def build_example_4_1(field: FieldSpec) -> MatAlgebra:
    """Six-parameter subalgebra of N_7 with parameters a..f."""
    n = 7
    cells = {
        "a": [(1, 2), (5, 7)],
        "b": [(1, 3), (2, 4), (6, 7)],
        "c": [(1, 4)],
        "d": [(1, 5), (2, 7)],
        "e": [(1, 6), (3, 7)],
        "f": [(1, 7)],
    }
    gens = [_pattern(n, field, c) for c in cells.values()]
    return MatAlgebra(span_echelon(gens), name=f"ex41({field.label})")


def build_prop32_forms(which: int, field: FieldSpec) -> Subspace:
    """Pattern spaces of 4x4 matrices commuting with E_12 + E_23.

    Form 3 is the centralizer pattern (b_12, b_13, b_14, b_43); form 4 the
    pattern (c_12, c_13) of its center.
    """
    n = 4
    shift = _pattern(n, field, [(1, 2), (2, 3)])
    if which == 3:
        mats = [shift] + [matrix_unit(n, i, j, field) for i, j in [(1, 3), (1, 4), (4, 3)]]
    elif which == 4:
        mats = [shift, matrix_unit(n, 1, 3, field)]
    else:
        raise ValueError("which must be 3 or 4")
    return span_echelon(mats, n=n, field=field)


def exterior_monomials(dim_v: int) -> list[tuple[int, ...]]:
    """Subsets of {1..dim_v} as sorted tuples, in lexicographic order."""
    subsets = [c for k in range(dim_v + 1) for c in combinations(range(1, dim_v + 1), k)]
    return sorted(subsets)


def wedge_monomials(s: tuple[int, ...], t: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """``e_s ^ e_t = sign * e_u``; sign 0 when the index sets meet."""
    if set(s) & set(t):
        return 0, ()
    word = list(s) + list(t)
    inversions = sum(1 for a in range(len(word)) for b in range(a + 1, len(word)) if word[a] > word[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(word))


def build_exterior_regular(dim_v: int, field: FieldSpec) -> MatAlgebra:
    """Left regular representation of the exterior algebra of F^dim_v."""
    if field.characteristic() == 2:
        raise ValueError("exterior algebras are only supported in characteristic != 2")
    if dim_v < 1:
        raise ValueError("dim_v must be positive")
    monos = exterior_monomials(dim_v)
    index = {m: k for k, m in enumerate(monos)}
    size = len(monos)
    mats = []
    for s in monos:
        rows = [[field.zero] * size for _ in range(size)]
        for col, t in enumerate(monos):
            sign, u = wedge_monomials(s, t)
            if sign:
                rows[index[u]][col] = field.reduce(sign)
        mats.append(Mat._raw(tuple(tuple(r) for r in rows), field))
    return MatAlgebra(span_echelon(mats), name=f"exterior{dim_v}({field.label})")


# Q8 = {1, -1, i, -i, j, -j, k, -k}; Q8_TABLE[x][y] is the index of x*y.
Q8_ELEMENTS = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
Q8_TABLE = (
    (0, 1, 2, 3, 4, 5, 6, 7),
    (1, 0, 3, 2, 5, 4, 7, 6),
    (2, 3, 1, 0, 6, 7, 5, 4),
    (3, 2, 0, 1, 7, 6, 4, 5),
    (4, 5, 7, 6, 1, 0, 2, 3),
    (5, 4, 6, 7, 0, 1, 3, 2),
    (6, 7, 4, 5, 3, 2, 1, 0),
    (7, 6, 5, 4, 2, 3, 0, 1),
)


def q8_regular_matrices(field: FieldSpec) -> list[Mat]:
    """Permutation matrices of left multiplication by each group element."""
    mats = []
    for g in range(8):
        rows = [[field.zero] * 8 for _ in range(8)]
        for h in range(8):
            rows[Q8_TABLE[g][h]][h] = field.one
        mats.append(Mat._raw(tuple(tuple(r) for r in rows), field))
    return mats


def build_q8_group_algebra(field: FieldSpec) -> MatAlgebra:
    return MatAlgebra(span_echelon(q8_regular_matrices(field)), name=f"q8({field.label})")


def build_jordan_nilpotent(n: int, field: FieldSpec) -> Mat:
    """E_12 + E_23 + ... + E_(n-1)n."""
    if n < 1:
        raise ValueError("n must be positive")
    return _pattern(n, field, [(i, i + 1) for i in range(1, n)])


def theorem_1_2_certificate(alg: MatAlgebra) -> SoSCertificate:
    """Sum-of-squares certificate for the n >= 7 family.

    phi sends a to the central element with b_1,n-2 = a_12 and
    b_1,n-1 = a_13; the forms are a_12 and a_13 and E = E_1n, so that
    a phi(a) = (a_12^2 + a_13^2) E_1n.
    """
    n, f = alg.n, alg.field
    gens = theorem_1_2_generators(n, f)
    b_far, b_near = gens[n - 4], gens[n - 3]  # parameters a_1,n-2 and a_1,n-1
    phi = tuple(b_far.scale(b.entry(1, 2)) + b_near.scale(b.entry(1, 3)) for b in alg.basis)
    ells = (tuple(b.entry(1, 2) for b in alg.basis), tuple(b.entry(1, 3) for b in alg.basis))
    return SoSCertificate(phi, matrix_unit(n, 1, n, f), ells, cert_id=f"thm12-sos-n{n}")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int | None
    field: FieldSpec


FAMILIES = (
    "full",
    "upper",
    "strict",
    "theorem12",
    "example41",
    "prop32form3",
    "prop32form4",
    "exterior",
    "q8",
    "jordan",
)


def build(spec: FamilySpec):
    """Dispatch on a :class:`FamilySpec`; returns a MatAlgebra, Subspace or Mat."""
    fam, n, f = spec.family.lower(), spec.n, spec.field
    if fam in ("full", "upper", "strict"):
        return build_standard(fam, _need(n, fam), f)
    if fam == "theorem12":
        return build_theorem_1_2(_need(n, fam), f)
    if fam == "example41":
        return build_example_4_1(f)
    if fam in ("prop32form3", "prop32form4"):
        return build_prop32_forms(int(fam[-1]), f)
    if fam == "exterior":
        return build_exterior_regular(_need(n, fam), f)
    if fam == "q8":
        return build_q8_group_algebra(f)
    if fam == "jordan":
        return build_jordan_nilpotent(_need(n, fam), f)
    raise ValueError(f"unknown family {spec.family!r}; choose from {', '.join(FAMILIES)}")


def _need(n, fam):
    if n is None:
        raise ValueError(f"family {fam} needs a size parameter")
    return n
