import random
from dataclasses import replace
from itertools import product

import numpy as np
import pytest

from cealg.algebra import MatAlgebra, adjoin_identity, is_commutative, random_coords
from cealg.ce import (
    CE,
    NOT_CE,
    UNKNOWN,
    _RankTest,
    ce_certificate_verify,
    ce_element_test,
    ce_exhaustive,
    ce_random_search,
    verify_witness,
)
from cealg.constructions import (
    build_example_4_1,
    build_exterior_regular,
    build_q8_group_algebra,
    build_standard,
    build_theorem_1_2,
    theorem_1_2_certificate,
)
from cealg.errors import BudgetExceeded
from cealg.explorer import random_subalgebra
from cealg.field import GF, QQ
from cealg.linalg import matrix_unit, span_echelon
from cealg.oracles import brute_element_passes, center_index

F3 = GF(3)


def E(n, i, j, f=F3):
    return matrix_unit(n, i, j, f)


# -- single elements --------------------------------------------------------


def test_e12_fails_in_strict_3x3():
    alg = build_standard("strict", 3, F3)
    t = ce_element_test(E(3, 1, 2), alg)
    assert not t.passes and not t.central
    assert t.W_a == alg.center() and t.image.dim == 0


def test_central_elements_pass():
    alg = build_standard("strict", 3, F3)
    assert ce_element_test(E(3, 1, 3), alg).passes


def test_theorem_generator_passes_over_q():
    alg = build_theorem_1_2(7, QQ)
    a = E(7, 1, 2, QQ) + E(7, 5, 7, QQ)
    b = E(7, 1, 5, QQ) + E(7, 2, 7, QQ)
    z = alg.center()
    assert z.contains(b) and a @ b == E(7, 1, 7, QQ)
    assert ce_element_test(a, alg).passes


def test_element_outside_algebra():
    with pytest.raises(ValueError):
        ce_element_test(E(3, 2, 1), build_standard("strict", 3, F3))


# -- exhaustive --------------------------------------------------------------


def test_example_is_ce():
    v = ce_exhaustive(build_example_4_1(F3))
    assert v.status == CE and v.witness is None


@pytest.mark.parametrize("n", [3, 4, 5])
def test_strict_upper_not_ce(n):
    alg = build_standard("strict", n, F3)
    v = ce_exhaustive(alg)
    assert v.status == NOT_CE and verify_witness(alg, v.witness)


@pytest.mark.parametrize("family", ["full", "upper"])
def test_two_by_two_controls(family):
    alg = build_standard(family, 2, F3)
    v = ce_exhaustive(alg)
    assert v.status == NOT_CE and verify_witness(alg, v.witness)


def test_commutative_needs_no_enumeration():
    alg = MatAlgebra(span_echelon([E(5, 1, k) for k in range(2, 6)]))
    v = ce_exhaustive(alg, budget=1)
    assert v.status == CE and v.reason == "commutative"


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        ce_exhaustive(build_example_4_1(F3), budget=100)


def test_exhaustive_needs_finite_field():
    with pytest.raises(ValueError):
        ce_exhaustive(build_example_4_1(QQ))


def test_exterior_parity():
    assert ce_exhaustive(build_exterior_regular(3, F3)).status == CE
    assert ce_exhaustive(build_exterior_regular(2, F3)).status == NOT_CE
    assert ce_exhaustive(build_exterior_regular(1, F3)).status == CE


def test_q8_is_ce():
    assert ce_exhaustive(build_q8_group_algebra(GF(2))).status == CE


@pytest.mark.parametrize("nil", [build_example_4_1(F3), build_standard("strict", 3, F3),
                                 build_standard("strict", 4, F3), MatAlgebra(span_echelon([E(3, 1, 3)]))],
                         ids=lambda a: a.name or "span(E13)")
def test_verdict_unchanged_by_adjoining_identity(nil):
    assert ce_exhaustive(nil).status == ce_exhaustive(adjoin_identity(nil)).status


def test_ce_verdict_serializes():
    d = ce_exhaustive(build_standard("strict", 3, F3)).to_dict()
    assert d["status"] == NOT_CE and d["witness"] and "examined" in d["stats"]


# -- random search -------------------------------------------------------------


def test_random_search_finds_witness_over_q():
    alg = build_standard("strict", 4, QQ)
    v = ce_random_search(alg, samples=100, seed=0)
    assert v.status == NOT_CE and verify_witness(alg, v.witness)


def test_random_search_unknown_for_theorem_family():
    v = ce_random_search(build_theorem_1_2(7, QQ), samples=1000, seed=0)
    assert v.status == UNKNOWN and "no witness found" in v.reason


def test_random_search_commutative():
    alg = MatAlgebra(span_echelon([E(4, 1, 3, QQ), E(4, 1, 4, QQ)]))
    assert ce_random_search(alg).status == CE


def test_random_search_is_seeded():
    alg = build_standard("strict", 5, F3)
    a, b = ce_random_search(alg, 50, seed=3), ce_random_search(alg, 50, seed=3)
    assert a.witness == b.witness


# -- certificates ---------------------------------------------------------------


@pytest.mark.parametrize("n", [7, 8, 9, 10, 11])
def test_certificate_accepted(n):
    alg = build_theorem_1_2(n, QQ)
    res = ce_certificate_verify(alg, theorem_1_2_certificate(alg))
    assert res.accepted and res.failed is None


def test_certificate_with_non_central_target():
    alg = build_theorem_1_2(7, QQ)
    cert = replace(theorem_1_2_certificate(alg), E=E(7, 1, 2, QQ))
    assert ce_certificate_verify(alg, cert).failed == "C3"


def test_certificate_missing_a_form():
    alg = build_theorem_1_2(7, QQ)
    cert = theorem_1_2_certificate(alg)
    cert = replace(cert, ells=cert.ells[:1])
    res = ce_certificate_verify(alg, cert)
    assert res.failed == "C4"
    # the non-central element with a_12 = 0, a_13 = 1 lies in the common zero set
    a = E(7, 1, 3, QQ) + E(7, 2, 4, QQ) + E(7, 6, 7, QQ)
    assert a in alg and not alg.center().contains(a)


def test_certificate_with_wrong_scale_fails_identity():
    alg = build_theorem_1_2(7, QQ)
    cert = theorem_1_2_certificate(alg)
    cert = replace(cert, E=cert.E.scale(2))
    assert ce_certificate_verify(alg, cert).failed == "C2"


def test_certificate_over_finite_field_rejected():
    alg = build_theorem_1_2(7, F3)
    assert ce_certificate_verify(alg, theorem_1_2_certificate(alg)).failed == "C5"


def test_certificate_shape_mismatch():
    alg7, alg8 = build_theorem_1_2(7, QQ), build_theorem_1_2(8, QQ)
    with pytest.raises(ValueError):
        ce_certificate_verify(alg8, theorem_1_2_certificate(alg7))


def test_accepted_certificate_means_no_random_witness():
    alg = build_theorem_1_2(8, QQ)
    assert ce_certificate_verify(alg, theorem_1_2_certificate(alg))
    v = ce_random_search(alg, samples=10_000, seed=11)
    assert v.status == UNKNOWN


# -- rank test against brute force -----------------------------------------------


def _pool():
    rng = random.Random(0)
    algs = [build_example_4_1(F3), build_exterior_regular(2, F3), build_q8_group_algebra(GF(2)),
            build_standard("upper", 3, F3), build_standard("full", 2, GF(5))]
    for spec in (("strict", 4, F3), ("strict", 5, F3), ("upper", 3, GF(5))):
        for _ in range(4):
            algs.append(random_subalgebra(build_standard(*spec), rng.randint(1, 3), rng))
    return [a for a in algs if a.field.p ** a.center().dim <= 3**8]


@pytest.mark.parametrize("alg", _pool(), ids=lambda a: f"{a.field.label}-dim{a.dim}")
def test_element_tests_agree_with_brute_force(alg):
    rng = random.Random(alg.dim)
    elems, keys = center_index(alg)
    rank_test = _RankTest(alg)
    for _ in range(40):
        c = random_coords(rng, alg.field, alg.dim)
        a = alg.element(c)
        brute = brute_element_passes(a, elems, keys, alg.field.p)
        central, passes = rank_test.batch(np.array([c], dtype=np.int64))
        assert ce_element_test(a, alg).passes == brute
        assert rank_test.is_central(c) or rank_test.passes(c) == brute
        assert bool(central[0] or passes[0]) == brute


def test_exhaustive_agrees_with_brute_force_on_small_algebras():
    rng = random.Random(7)
    amb = build_standard("strict", 4, F3)
    for _ in range(15):
        alg = random_subalgebra(amb, rng.randint(1, 3), rng)
        elems, keys = center_index(alg)
        brute_ce = bool(is_commutative(alg)) or all(
            brute_element_passes(alg.element(c), elems, keys, 3) for c in product(range(3), repeat=alg.dim)
        )
        assert (ce_exhaustive(alg).status == CE) == brute_ce


@pytest.mark.parametrize("n,p", [(7, 5), (8, 5), (7, 7)])
def test_theorem_family_ce_over_other_primes(n, p):
    # a_12^2 + a_13^2 can vanish here, but other central partners still work
    assert ce_exhaustive(build_theorem_1_2(n, GF(p)), budget=p ** (n - 1)).status == CE
