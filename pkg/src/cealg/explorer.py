"""Randomised campaigns over subalgebras of small nilpotent matrix algebras.

Each trial closes a handful of random elements of an ambient algebra and
classifies the result.  Trials are seeded from ``(seed, trial index)`` so
a campaign is reproducible and its trials can run in any order.
"""

from __future__ import annotations

import hashlib
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field

from .algebra import (
    DEFAULT_BUDGET,
    MatAlgebra,
    adjoin_identity,
    close_under_multiplication,
    enumerate_idempotents,
    is_commutative,
    power_chain,
    random_coords,
)
from .ce import CE, ce_exhaustive
from .constructions import FamilySpec, build
from .errors import BudgetExceeded
from .fileio import dumps_algebra, loads_algebra
from .oracles import center_is_reduced

__all__ = [
    "CampaignConfig",
    "TrialRecord",
    "SearchReport",
    "random_subalgebra",
    "run_ce_implies_commutative_campaign",
    "run_oq54_search",
    "run_prop23_equivalence",
    "reverify_hit",
]

SKIPPED = "Skipped"


def random_subalgebra(ambient: MatAlgebra, k: int, seed=None) -> MatAlgebra:
    """Closure of k uniformly random elements of a finite-field algebra."""
    if not ambient.field.is_finite:
        raise ValueError("random subalgebras need a finite field")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    gens = [ambient.element(random_coords(rng, ambient.field, ambient.dim)) for _ in range(k)]
    return close_under_multiplication(gens, n=ambient.n, field=ambient.field, max_dim=ambient.dim)


@dataclass
class CampaignConfig:
    ambient: FamilySpec
    trials: int
    seed: int = 0
    generator_count: tuple[int, int] | None = None  # inclusive; default 1..dim(ambient)
    budget: int = DEFAULT_BUDGET
    inject: list = dc_field(default_factory=list)  # extra MatAlgebra trials, run first
    jobs: int = 1


@dataclass
class TrialRecord:
    index: int
    dim: int
    status: str
    commutative: bool
    nilpotence_index: int | None
    center_dim: int
    center_reduced: bool | None = None
    idempotents_central: bool | None = None
    injected: bool = False
    fingerprint: str = ""

    @property
    def hit(self) -> bool:
        return self.status == CE and not self.commutative


@dataclass
class SearchReport:
    ambient: str
    trials_run: int
    seed: int
    ce_count: int = 0
    commutative_count: int = 0
    skipped: int = 0
    hits: list[str] = dc_field(default_factory=list)
    hit_trials: list[int] = dc_field(default_factory=list)
    hit_nilpotence_index: list = dc_field(default_factory=list)
    reverified: list[bool] = dc_field(default_factory=list)
    reduced_center_violations: list[int] = dc_field(default_factory=list)
    noncentral_idempotent_violations: list[int] = dc_field(default_factory=list)
    index_two_violations: list[int] = dc_field(default_factory=list)
    distinct_algebras: int = 0
    seconds: float = 0.0
    records: list[TrialRecord] = dc_field(default_factory=list)

    @property
    def summary(self) -> str:
        if not self.hits:
            found = f"no witness found in {self.trials_run} trials"
        else:
            found = f"{len(self.hits)} non-commutative CE hit(s) in {self.trials_run} trials"
        return (
            f"{self.ambient}: {found}; CE={self.ce_count} commutative={self.commutative_count} "
            f"skipped={self.skipped} distinct={self.distinct_algebras}"
        )

    def to_dict(self, with_records: bool = False) -> dict:
        d = asdict(self)
        if not with_records:
            d.pop("records")
        d["summary"] = self.summary
        return d


def _evaluate(alg: MatAlgebra, budget: int) -> dict:
    try:
        verdict = ce_exhaustive(alg, budget)
        status = verdict.status
    except BudgetExceeded:
        status = SKIPPED
    comm = bool(is_commutative(alg))
    out = {
        "dim": alg.dim,
        "status": status,
        "commutative": comm,
        "nilpotence_index": power_chain(alg).nilpotence_index,
        "center_dim": alg.center().dim,
    }
    if status == CE:
        try:
            out["center_reduced"] = center_is_reduced(alg, budget)
        except BudgetExceeded:
            pass
        if not comm:
            try:
                z = alg.center()
                out["idempotents_central"] = all(z.contains(e) for e in enumerate_idempotents(alg, budget))
            except BudgetExceeded:
                pass
    return out


def _fingerprint(alg: MatAlgebra) -> str:
    return hashlib.sha1(repr((alg.field.label, alg.n, alg.space.basis)).encode()).hexdigest()[:16]


def _trial_algebra(ambient: MatAlgebra, cfg_seed: int, index: int, gen_range: tuple[int, int]) -> MatAlgebra:
    rng = random.Random(f"{cfg_seed}:{index}")
    k = rng.randint(*gen_range)
    return random_subalgebra(ambient, k, rng)


def _run_trials(args) -> list[tuple[TrialRecord, str | None]]:
    ambient_spec, seed, indices, gen_range, budget = args
    ambient = build(ambient_spec)
    cache: dict = {}
    out = []
    for i in indices:
        alg = _trial_algebra(ambient, seed, i, gen_range)
        key = alg.space.basis
        if key not in cache:
            cache[key] = _evaluate(alg, budget)
        info = cache[key]
        rec = TrialRecord(index=i, fingerprint=_fingerprint(alg), **info)
        out.append((rec, dumps_algebra(alg) if rec.hit else None))
    return out


def reverify_hit(text: str, budget: int = DEFAULT_BUDGET) -> bool:
    """Reload a serialized hit and confirm it is CE and non-commutative."""
    alg = loads_algebra(text)
    return ce_exhaustive(alg, budget).status == CE and not is_commutative(alg)


def _campaign(cfg: CampaignConfig) -> SearchReport:
    start = time.perf_counter()
    ambient = build(cfg.ambient)
    if not isinstance(ambient, MatAlgebra) or not ambient.field.is_finite:
        raise ValueError("campaign ambient must be an algebra over a finite field")
    gen_range = cfg.generator_count or (1, ambient.dim)
    results: list[tuple[TrialRecord, str | None]] = []
    for j, alg in enumerate(cfg.inject):
        rec = TrialRecord(index=-(j + 1), injected=True, fingerprint=_fingerprint(alg), **_evaluate(alg, cfg.budget))
        results.append((rec, dumps_algebra(alg) if rec.hit else None))
    indices = list(range(cfg.trials))
    if cfg.jobs > 1 and cfg.trials > 1:
        step = -(-len(indices) // cfg.jobs)
        batches = [indices[s:s + step] for s in range(0, len(indices), step)]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for part in pool.map(_run_trials, [(cfg.ambient, cfg.seed, b, gen_range, cfg.budget) for b in batches]):
                results.extend(part)
    elif indices:
        results.extend(_run_trials((cfg.ambient, cfg.seed, indices, gen_range, cfg.budget)))

    label = f"{cfg.ambient.family}{cfg.ambient.n or ''}({cfg.ambient.field.label})"
    report = SearchReport(ambient=label, trials_run=len(results), seed=cfg.seed)
    distinct = set()
    for rec, text in sorted(results, key=lambda r: r[0].index):
        report.records.append(rec)
        if rec.status == SKIPPED:
            report.skipped += 1
        if rec.status == CE:
            report.ce_count += 1
        if rec.commutative:
            report.commutative_count += 1
        if rec.status == CE and rec.center_reduced and not rec.commutative:
            report.reduced_center_violations.append(rec.index)
        if rec.idempotents_central is False:
            report.noncentral_idempotent_violations.append(rec.index)
        if rec.nilpotence_index == 2 and not rec.commutative:
            report.index_two_violations.append(rec.index)
        if text is not None:
            report.hits.append(text)
            report.hit_trials.append(rec.index)
            report.hit_nilpotence_index.append(rec.nilpotence_index)
            report.reverified.append(reverify_hit(text, cfg.budget))
        distinct.add(rec.fingerprint)
    report.distinct_algebras = len(distinct)
    report.seconds = time.perf_counter() - start
    return report


def run_ce_implies_commutative_campaign(cfg: CampaignConfig) -> SearchReport:
    """Every CE trial algebra should be commutative; hits are violations.

    Intended for N_3 and N_4 over F_p with p odd; an injected algebra may be
    used to confirm that hits are detected.
    """
    if cfg.ambient.field.characteristic() == 2:
        raise ValueError("this campaign assumes characteristic != 2")
    return _campaign(cfg)


def run_oq54_search(cfg: CampaignConfig) -> SearchReport:
    """Look for non-commutative CE subalgebras of N_5 / N_6.

    Exploratory: an empty hit list only means none was found.
    """
    return _campaign(cfg)


@dataclass
class EquivalenceRow:
    name: str
    nilpotent_status: str
    unital_status: str

    @property
    def agree(self) -> bool:
        return self.nilpotent_status == self.unital_status


def run_prop23_equivalence(cases, budget: int = DEFAULT_BUDGET) -> list[EquivalenceRow]:
    """Compare the CE verdict of N and of F*E_n + N for each nilpotent N."""
    rows = []
    for alg in cases:
        a = ce_exhaustive(alg, budget).status
        b = ce_exhaustive(adjoin_identity(alg), budget).status
        rows.append(EquivalenceRow(alg.name or f"dim{alg.dim}", a, b))
    return rows
