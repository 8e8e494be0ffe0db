import json

import pytest

from cealg.algebra import is_commutative, power_chain
from cealg.ce import CE
from cealg.constructions import FamilySpec, build_standard, build_theorem_1_2
from cealg.explorer import (
    CampaignConfig,
    random_subalgebra,
    reverify_hit,
    run_ce_implies_commutative_campaign,
    run_oq54_search,
    run_prop23_equivalence,
)
from cealg.field import GF, QQ
from cealg.fileio import dumps_algebra, loads_algebra

F3 = GF(3)


def test_zero_generators_give_zero_algebra():
    assert random_subalgebra(build_standard("strict", 3, F3), 0, seed=1).dim == 0


def test_random_subalgebra_is_reproducible():
    amb = build_standard("strict", 3, F3)
    assert random_subalgebra(amb, 2, seed=5).space == random_subalgebra(amb, 2, seed=5).space


def test_enough_generators_eventually_fill_ambient():
    amb = build_standard("strict", 3, F3)
    assert any(random_subalgebra(amb, amb.dim, seed=s).space == amb.space for s in range(20))


def test_random_subalgebra_needs_finite_field():
    with pytest.raises(ValueError):
        random_subalgebra(build_standard("strict", 3, QQ), 1, seed=0)


@pytest.mark.parametrize("n,p", [(3, 3), (4, 3), (4, 5)])
def test_small_campaigns_have_no_violations(n, p):
    rep = run_ce_implies_commutative_campaign(CampaignConfig(FamilySpec("strict", n, GF(p)), trials=500, seed=1))
    assert rep.trials_run == 500 and rep.skipped == 0
    assert rep.hits == [] and rep.reduced_center_violations == [] and rep.index_two_violations == []
    assert rep.ce_count > 0


def test_campaign_refuses_characteristic_two():
    with pytest.raises(ValueError):
        run_ce_implies_commutative_campaign(CampaignConfig(FamilySpec("strict", 3, GF(2)), trials=1))


def test_injected_algebra_is_detected():
    inject = build_theorem_1_2(7, F3)
    cfg = CampaignConfig(FamilySpec("strict", 7, F3), trials=3, seed=0, inject=[inject])
    for runner in (run_ce_implies_commutative_campaign, run_oq54_search):
        rep = runner(cfg)
        assert rep.hit_trials == [-1] and rep.reverified == [True]
        assert rep.hit_nilpotence_index == [3]
        hit = loads_algebra(rep.hits[0])
        assert hit == inject and not is_commutative(hit)


def test_zero_trials_give_empty_report():
    rep = run_oq54_search(CampaignConfig(FamilySpec("strict", 5, F3), trials=0))
    assert rep.trials_run == 0 and rep.hits == [] and rep.records == []
    assert rep.summary.startswith("strict5(F3): no witness found in 0 trials")


def test_campaigns_are_deterministic():
    cfg = CampaignConfig(FamilySpec("strict", 5, F3), trials=60, seed=42)
    a, b = run_oq54_search(cfg), run_oq54_search(cfg)
    strip = lambda r: {k: v for k, v in r.to_dict(with_records=True).items() if k != "seconds"}
    assert strip(a) == strip(b)


def test_parallel_matches_serial():
    cfg = CampaignConfig(FamilySpec("strict", 4, F3), trials=40, seed=3)
    serial = run_oq54_search(cfg)
    cfg.jobs = 2
    parallel = run_oq54_search(cfg)
    assert serial.records == parallel.records


def test_trial_records_are_consistent():
    rep = run_oq54_search(CampaignConfig(FamilySpec("strict", 5, F3), trials=80, seed=9))
    for rec in rep.records:
        if rec.nilpotence_index == 2:
            assert rec.commutative
        if rec.status == CE and not rec.commutative:
            assert rec.idempotents_central is not None
    json.dumps(rep.to_dict(with_records=True))


def test_budget_limited_trials_are_skipped_and_counted():
    rep = run_oq54_search(CampaignConfig(FamilySpec("strict", 5, F3), trials=30, seed=0, budget=3**3))
    assert rep.skipped > 0
    assert rep.skipped == sum(r.status == "Skipped" for r in rep.records)


def test_reverify_hit_rejects_commutative():
    assert not reverify_hit(dumps_algebra(build_standard("strict", 2, F3)))


def test_search_wording_never_claims_non_existence():
    rep = run_oq54_search(CampaignConfig(FamilySpec("strict", 5, F3), trials=20, seed=1))
    assert "no witness found in 20 trials" in rep.summary
    assert "exist" not in rep.summary


def test_equivalence_rows():
    rows = run_prop23_equivalence([build_standard("strict", 3, F3), build_theorem_1_2(7, F3)])
    assert [(r.nilpotent_status, r.unital_status) for r in rows] == [("NotCE", "NotCE"), ("CE", "CE")]
    assert all(r.agree for r in rows)


def test_power_chain_recorded_for_hits():
    alg = build_theorem_1_2(8, F3)
    rep = run_oq54_search(CampaignConfig(FamilySpec("strict", 8, F3), trials=0, inject=[alg]))
    assert rep.hit_nilpotence_index == [power_chain(alg).nilpotence_index]
