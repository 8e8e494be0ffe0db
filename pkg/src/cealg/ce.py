"""Deciding whether a matrix algebra is centrally essential.

An algebra is centrally essential (CE) when it is commutative or every
non-central element ``a`` has a central ``x`` with ``a x`` central and
nonzero.  For a fixed ``a`` the admissible ``x`` form the subspace

    W_a = {x in Z : a x in Z},

so ``a`` passes iff ``a W_a != 0``.  Writing ``L_a`` for the map
``x -> a x`` on Z and ``Q`` for a linear map whose kernel is Z, this is the
rank condition ``rank(L_a) > rank(Q L_a)``, which is what the enumerating
checkers evaluate.  :func:`ce_element_test` computes ``W_a`` as an explicit
subspace instead and is used to re-verify every witness.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _fp
from .algebra import (
    DEFAULT_BUDGET,
    MatAlgebra,
    _check_budget,
    coordinate_chunks,
    is_commutative,
    random_coords,
)
from .field import QQ
from .linalg import Mat, Subspace, VectorSpace, rank, solve_kernel, span_echelon

__all__ = [
    "CE",
    "NOT_CE",
    "UNKNOWN",
    "CEVerdict",
    "ElementTest",
    "SoSCertificate",
    "CertificateResult",
    "ce_element_test",
    "ce_exhaustive",
    "ce_random_search",
    "ce_certificate_verify",
    "verify_witness",
]

CE = "CE"
NOT_CE = "NotCE"
UNKNOWN = "Unknown"


@dataclass
class CEVerdict:
    status: str
    witness: Mat | None = None
    certificate_id: str | None = None
    reason: str = ""
    stats: dict = dc_field(default_factory=dict)

    @property
    def is_ce(self) -> bool:
        return self.status == CE

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else [[str(x) for x in r] for r in self.witness.rows],
            "certificate_id": self.certificate_id,
            "reason": self.reason,
            "stats": dict(self.stats),
        }


@dataclass(frozen=True)
class ElementTest:
    passes: bool
    central: bool
    W_a: Subspace
    image: Subspace


def ce_element_test(a: Mat, alg: MatAlgebra, center: Subspace | None = None) -> ElementTest:
    """Compute W_a and a W_a for one element and decide whether it passes."""
    if a not in alg:
        raise ValueError("element does not belong to the algebra")
    z = alg.center() if center is None else center
    f, n = alg.field, alg.n
    central = z.contains(a)
    zb = z.mats
    if not zb:
        empty = Subspace.zero(n, f)
        return ElementTest(central, central, empty, empty)
    # sum_k y_k (a z_k) - sum_l w_l z_l = 0
    cols = [(a @ zk).flat() for zk in zb] + [(-zl).flat() for zl in zb]
    system = [list(r) for r in zip(*cols)]
    ker = solve_kernel(system, f, 2 * len(zb))
    w = span_echelon([z.element(v[: len(zb)]) for v in ker.basis], n=n, field=f)
    image = span_echelon([a @ x for x in w.mats], n=n, field=f)
    return ElementTest(central or image.dim > 0, central, w, image)


def verify_witness(alg: MatAlgebra, a: Mat) -> bool:
    """True iff ``a`` is a genuine non-CE witness, using a freshly computed center."""
    t = ce_element_test(a, alg, center=alg.center(fresh=True))
    return not t.central and t.image.dim == 0


class _RankTest:
    """Precomputed data for the rank form of the element test."""

    def __init__(self, alg: MatAlgebra):
        f = alg.field
        self.alg = alg
        self.d = alg.dim
        z = alg.center()
        zc = [alg.coords(m) for m in z.mats]
        self.m = len(zc)
        t = alg.structure_tensor()
        # T[i][k] = coordinates of B_i z_k
        self.T = [
            [
                tuple(
                    f.reduce(sum(zc[k][l] * t[i][l][c] for l in range(self.d)))
                    for c in range(self.d)
                )
                for k in range(self.m)
            ]
            for i in range(self.d)
        ]
        self.Q = list(VectorSpace(zc, f, self.d).annihilator().basis)
        if alg.fast:
            p = f.p
            self.T_np = np.array(self.T, dtype=np.int64).reshape(self.d, self.m, self.d)
            self.Q_np = np.array(self.Q, dtype=np.int64).reshape(len(self.Q), self.d)
            self.inv = _fp.inverse_table(p)

    def is_central(self, c) -> bool:
        red = self.alg.field.reduce
        return all(red(sum(q * x for q, x in zip(row, c))) == 0 for row in self.Q)

    def passes(self, c) -> bool:
        f = self.alg.field
        red = f.reduce
        d, m = self.d, self.m
        if m == 0:
            return False
        la = [[red(sum(c[i] * self.T[i][k][j] for i in range(d) if c[i] != 0)) for k in range(m)] for j in range(d)]
        qla = [[red(sum(q[j] * la[j][k] for j in range(d))) for k in range(m)] for q in self.Q]
        return rank(la, f) > rank(qla, f)

    def batch(self, coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(central, passes) masks for a stack of coordinate vectors."""
        p = self.alg.field.p
        central = ~((coords @ self.Q_np.T % p).any(axis=1))
        if self.m == 0:
            return central, np.zeros(coords.shape[0], dtype=bool)
        la = np.einsum("ni,ikj->njk", coords, self.T_np) % p
        qla = np.einsum("qj,njk->nqk", self.Q_np, la) % p
        r1 = _fp.batched_rank_mod_p(la, p, self.inv)
        r2 = _fp.batched_rank_mod_p(qla, p, self.inv)
        return central, r1 > r2


def ce_exhaustive(alg: MatAlgebra, budget: int = DEFAULT_BUDGET) -> CEVerdict:
    """Decide CE over a finite field by visiting every element.

    Elements are visited one per line through the origin (leading
    coordinate 1) in odometer order; scaling does not change the test.
    """
    start = time.perf_counter()
    if not alg.field.is_finite:
        raise ValueError(f"exhaustive check needs a finite field, got {alg.field}")
    comm = is_commutative(alg)
    if comm:
        return CEVerdict(CE, reason="commutative", stats={"examined": 0, "seconds": time.perf_counter() - start})
    size = _check_budget(alg, budget)
    test = _RankTest(alg)
    examined = 0
    for coords in coordinate_chunks(alg.field.p, alg.dim, normalized=True):
        central, passes = test.batch(coords)
        bad = np.flatnonzero(~central & ~passes)
        if bad.size:
            examined += int(bad[0]) + 1
            witness = alg.element([int(x) for x in coords[bad[0]]])
            return CEVerdict(
                NOT_CE,
                witness=witness,
                reason="non-central element with a W_a = 0",
                stats={"examined": examined, "space_size": size, "seconds": time.perf_counter() - start},
            )
        examined += coords.shape[0]
    return CEVerdict(
        CE,
        reason="every non-central element passes",
        stats={"examined": examined, "space_size": size, "seconds": time.perf_counter() - start},
    )


def ce_random_search(alg: MatAlgebra, samples: int = 1000, seed: int = 0, max_redraws: int = 64) -> CEVerdict:
    """Look for a non-CE witness among random non-central elements.

    Can refute CE but never establish it (except for commutative input).
    Rational coordinates are drawn from the integers -3..3.
    """
    start = time.perf_counter()
    if is_commutative(alg):
        return CEVerdict(CE, reason="commutative", stats={"examined": 0, "seconds": 0.0})
    test = _RankTest(alg)
    rng = random.Random(seed)
    examined = 0
    for _ in range(samples):
        for _ in range(max_redraws):
            c = random_coords(rng, alg.field, alg.dim)
            if not test.is_central(c):
                break
        else:
            continue
        examined += 1
        if not test.passes(c):
            witness = alg.element(c)
            if not verify_witness(alg, witness):
                raise AssertionError("rank test and subspace test disagree on a witness")
            return CEVerdict(
                NOT_CE,
                witness=witness,
                reason="random non-central element with a W_a = 0",
                stats={"examined": examined, "seed": seed, "seconds": time.perf_counter() - start},
            )
    return CEVerdict(
        UNKNOWN,
        reason=f"no witness found in {examined} samples",
        stats={"examined": examined, "seed": seed, "seconds": time.perf_counter() - start},
    )


# ---------------------------------------------------------------------------
# sum-of-squares certificates over Q


@dataclass(frozen=True)
class SoSCertificate:
    """Witness selector ``phi``, target ``E`` and linear forms ``ells``.

    ``phi[i]`` is the image of the i-th canonical basis element of the
    algebra; each entry of ``ells`` is a coefficient vector over the same
    basis.  The claim is ``a phi(a) = (sum_j ells_j(a)^2) E`` for all a.
    """

    phi: tuple[Mat, ...]
    E: Mat
    ells: tuple[tuple, ...]
    cert_id: str = "sos"


@dataclass(frozen=True)
class CertificateResult:
    accepted: bool
    failed: str | None = None
    detail: str = ""

    def __bool__(self):
        return self.accepted


def ce_certificate_verify(alg: MatAlgebra, cert: SoSCertificate) -> CertificateResult:
    """Check obligations C1-C5; acceptance proves the algebra CE over Q."""
    f, d = alg.field, alg.dim
    if f != QQ:
        return CertificateResult(False, "C5", f"certificates are only sound over Q, algebra is over {f}")
    if len(cert.phi) != d or any(len(l) != d for l in cert.ells):
        raise ValueError("certificate does not match the algebra dimension")
    if any(m.n != alg.n or m.field != f for m in (*cert.phi, cert.E)):
        raise ValueError("certificate matrices do not match the algebra")
    z = alg.center()
    if cert.E.is_zero() or not z.contains(cert.E):
        return CertificateResult(False, "C3", "target E must be a nonzero central element")
    for i, img in enumerate(cert.phi):
        if not z.contains(img):
            return CertificateResult(False, "C1", f"phi of basis element {i} is not central")
    ells = [[f.coerce(x) for x in l] for l in cert.ells]
    common_zeros = solve_kernel(ells, f, d) if ells else VectorSpace([[f.one if i == j else f.zero for j in range(d)] for i in range(d)], f, d)
    for v in common_zeros.basis:
        if not z.contains(alg.element(v)):
            return CertificateResult(False, "C4", "an element with all forms zero is not central")
    basis = alg.basis
    for i in range(d):
        for j in range(i, d):
            lhs = basis[i] @ cert.phi[j] + basis[j] @ cert.phi[i]
            coeff = 2 * sum(l[i] * l[j] for l in ells)
            if lhs != cert.E.scale(coeff):
                return CertificateResult(False, "C2", f"polarised identity fails on basis pair ({i}, {j})")
    return CertificateResult(True, None, "all obligations hold")
