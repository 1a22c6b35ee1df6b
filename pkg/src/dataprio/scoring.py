"""Priority index, rankings, roll-ups and rank-stability statistics.

The priority index of a data item accumulates, over every decision linked
to it, the decision's weighted data support split evenly across that
decision's linked items: I(l) = sum_j w_j * d_j * phi_jl / n_j. Decisions
without any linked item contribute nothing (their weighted support is
reported separately as unsupported weight).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import build_trial_plan, trial_scores
from .elicitation import ConsensusParameters, ScenarioJudgments
from .model import IncidenceMap, LinkingModel, derive_incidence

__all__ = [
    "ItemMeta",
    "RankEntry",
    "PriorityReport",
    "RollupRow",
    "WeightRollup",
    "TopNComparison",
    "DeltaEntry",
    "ItemSensitivity",
    "SensitivityReport",
    "priority_index",
    "total_weighted_support",
    "rank_items",
    "build_priority_report",
    "rollup_weights",
    "compare_top_n",
    "scenario_delta",
    "perturb_sensitivity",
]


@dataclass(frozen=True)
class ItemMeta:
    id: str
    name: str
    category: str


@dataclass(frozen=True)
class RankEntry:
    rank: int
    item_id: str
    score: float


@dataclass(frozen=True)
class PriorityReport:
    """Scored and ranked data items for one scenario.

    ``ranking`` may be truncated to a top-N; ``item_scores`` always covers
    every item. ``unsupported_weight`` is the weighted support of decisions
    that have no linked items and therefore reach no item score.
    """

    scenario_id: str
    item_scores: dict[str, float]
    ranking: tuple[RankEntry, ...]
    total_weighted_support: float
    unsupported_weight: float
    item_meta: dict[str, ItemMeta]


@dataclass(frozen=True)
class RollupRow:
    id: str
    name: str
    weight: float


@dataclass(frozen=True)
class WeightRollup:
    """Decision weights summed up the hierarchy."""

    value_streams: tuple[RollupRow, ...]
    processes: tuple[RollupRow, ...]
    total: float


@dataclass(frozen=True)
class TopNComparison:
    n: int
    overlap_count: int
    common_ids: tuple[str, ...]
    only_a: tuple[str, ...]
    only_b: tuple[str, ...]


@dataclass(frozen=True)
class DeltaEntry:
    item_id: str
    score_a: float
    score_b: float
    rank_a: int
    rank_b: int
    rank_delta: int  # rank_b - rank_a; negative = improved in b


@dataclass(frozen=True)
class ItemSensitivity:
    item_id: str
    baseline_rank: int
    min_rank: int
    max_rank: int
    top_k_probability: float


@dataclass(frozen=True)
class SensitivityReport:
    scenario_id: str
    epsilon: float
    trials: int
    seed: int
    top_k: int
    items: tuple[ItemSensitivity, ...]  # ordered by baseline rank
    item_meta: dict[str, ItemMeta]


def _check_same_decisions(params: ConsensusParameters, decision_ids) -> None:
    expected = set(decision_ids)
    if set(params.decision_weights) != expected or set(params.supports) != expected:
        raise ValueError("parameters and model cover different decision sets")


def priority_index(
    params: ConsensusParameters, incidence: IncidenceMap
) -> dict[str, float]:
    """Score every data item. Items with no links score 0."""
    _check_same_decisions(params, incidence.decision_ids)

    scores = {item_id: 0.0 for item_id in incidence.item_ids}
    for dec_id in incidence.decision_ids:
        linked = incidence.links[dec_id]
        n = len(linked)
        if n == 0:
            continue
        term = (params.decision_weights[dec_id] * params.supports[dec_id]) / n
        for item_id in linked:
            scores[item_id] += term
    return scores


def total_weighted_support(params: ConsensusParameters) -> float:
    """Sum of w_j * d_j: how much total decision weight data can carry."""
    if set(params.decision_weights) != set(params.supports):
        raise ValueError("weights and supports cover different decision sets")
    total = 0.0
    for dec_id, weight in params.decision_weights.items():
        total += weight * params.supports[dec_id]
    return total


def rank_items(
    scores: dict[str, float], top_n: int | None = None
) -> tuple[RankEntry, ...]:
    """Total order: score descending, ties broken by item id ascending."""
    if top_n is not None and top_n < 0:
        raise ValueError("top_n must be non-negative")
    order = sorted(scores, key=lambda item_id: (-scores[item_id], item_id))
    if top_n is not None:
        order = order[:top_n]
    return tuple(
        RankEntry(rank, item_id, scores[item_id])
        for rank, item_id in enumerate(order, start=1)
    )


def build_priority_report(
    model: LinkingModel,
    params: ConsensusParameters,
    scenario_id: str,
    top_n: int | None = None,
) -> PriorityReport:
    incidence = derive_incidence(model)
    scores = priority_index(params, incidence)
    tws = total_weighted_support(params)

    unsupported = 0.0
    for dec_id in incidence.decision_ids:
        if incidence.fanout[dec_id] == 0:
            unsupported += (
                params.decision_weights[dec_id] * params.supports[dec_id]
            )

    return PriorityReport(
        scenario_id=scenario_id,
        item_scores=scores,
        ranking=rank_items(scores, top_n),
        total_weighted_support=tws,
        unsupported_weight=unsupported,
        item_meta={
            item.id: ItemMeta(item.id, item.name, item.category)
            for item in model.data_items
        },
    )


def rollup_weights(params: ConsensusParameters, model: LinkingModel) -> WeightRollup:
    """Sum decision weights per process and per value stream."""
    _check_same_decisions(params, [dec.id for dec in model.decisions])

    processes: list[RollupRow] = []
    value_streams: list[RollupRow] = []
    grand_total = 0.0
    for vs in model.value_streams:
        vs_total = 0.0
        for proc in vs.processes:
            proc_total = 0.0
            for dec in proc.decisions:
                proc_total += params.decision_weights[dec.id]
            processes.append(RollupRow(proc.id, proc.name, proc_total))
            vs_total += proc_total
        value_streams.append(RollupRow(vs.id, vs.name, vs_total))
        grand_total += vs_total
    return WeightRollup(tuple(value_streams), tuple(processes), grand_total)


def compare_top_n(ranking_a, ranking_b, n: int) -> TopNComparison:
    """Overlap of the two rankings' first n items."""
    if n < 1:
        raise ValueError("n must be >= 1")
    top_a = [entry.item_id for entry in ranking_a[:n]]
    top_b = [entry.item_id for entry in ranking_b[:n]]
    set_b = set(top_b)
    set_a = set(top_a)
    common = tuple(item_id for item_id in top_a if item_id in set_b)
    return TopNComparison(
        n=n,
        overlap_count=len(common),
        common_ids=common,
        only_a=tuple(i for i in top_a if i not in set_b),
        only_b=tuple(i for i in top_b if i not in set_a),
    )


def scenario_delta(
    report_a: PriorityReport, report_b: PriorityReport
) -> tuple[DeltaEntry, ...]:
    """Per-item score and rank movement between two scenarios.

    Needs untruncated rankings on both sides; ordered by absolute rank
    movement, largest first.
    """
    if set(report_a.item_scores) != set(report_b.item_scores):
        raise ValueError("reports cover different item sets")
    if len(report_a.ranking) != len(report_a.item_scores) or len(
        report_b.ranking
    ) != len(report_b.item_scores):
        raise ValueError("scenario deltas need full (untruncated) rankings")

    rank_a = {entry.item_id: entry.rank for entry in report_a.ranking}
    rank_b = {entry.item_id: entry.rank for entry in report_b.ranking}
    deltas = [
        DeltaEntry(
            item_id=item_id,
            score_a=report_a.item_scores[item_id],
            score_b=report_b.item_scores[item_id],
            rank_a=rank_a[item_id],
            rank_b=rank_b[item_id],
            rank_delta=rank_b[item_id] - rank_a[item_id],
        )
        for item_id in report_a.item_scores
    ]
    deltas.sort(key=lambda d: (-abs(d.rank_delta), d.item_id))
    return tuple(deltas)


def _rank_vector(scores: np.ndarray, id_rank_key: np.ndarray) -> np.ndarray:
    # primary: score descending; secondary: item id ascending
    order = np.lexsort((id_rank_key, -scores))
    ranks = np.empty(len(scores), dtype=np.int64)
    ranks[order] = np.arange(1, len(scores) + 1)
    return ranks


def perturb_sensitivity(
    model: LinkingModel,
    judgments: ScenarioJudgments,
    epsilon: float,
    trials: int,
    seed: int,
    top_k: int,
    support_policy: str = "strict",
) -> SensitivityReport:
    """Rank stability under multiplicative noise on the raw judgments.

    Each trial multiplies every provisional swing percent and every
    positive support value by an independent factor from [1-eps, 1+eps]
    (each judgment's maximum is then rescaled to 100, supports are clamped
    to at most 0.9) and re-runs the whole pipeline. Trial t draws from a
    stream seeded by (seed, t), so reports are reproducible and independent
    of any execution schedule.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if seed < 0:
        raise ValueError("seed must be >= 0")
    if top_k < 1:
        raise ValueError("top_k must be >= 1")

    plan = build_trial_plan(model, judgments, support_policy)
    n_items = plan.n_items

    items_by_id = sorted(range(n_items), key=lambda i: plan.item_ids[i])
    id_rank_key = np.empty(n_items, dtype=np.intp)
    id_rank_key[items_by_id] = np.arange(n_items)

    unit_swings = np.ones(plan.n_entries, dtype=np.float64)
    unit_supports = np.ones(plan.n_supports, dtype=np.float64)
    base_ranks = _rank_vector(trial_scores(plan, unit_swings, unit_supports), id_rank_key)

    min_ranks = base_ranks.copy()
    max_ranks = base_ranks.copy()
    top_hits = np.zeros(n_items, dtype=np.int64)
    low, high = 1.0 - epsilon, 1.0 + epsilon
    for t in range(trials):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, t))))
        swing_factors = rng.uniform(low, high, plan.n_entries)
        support_factors = rng.uniform(low, high, plan.n_supports)
        ranks = _rank_vector(trial_scores(plan, swing_factors, support_factors), id_rank_key)
        np.minimum(min_ranks, ranks, out=min_ranks)
        np.maximum(max_ranks, ranks, out=max_ranks)
        top_hits += ranks <= top_k

    by_baseline = sorted(range(n_items), key=lambda i: int(base_ranks[i]))
    items = tuple(
        ItemSensitivity(
            item_id=plan.item_ids[i],
            baseline_rank=int(base_ranks[i]),
            min_rank=int(min_ranks[i]),
            max_rank=int(max_ranks[i]),
            top_k_probability=int(top_hits[i]) / trials,
        )
        for i in by_baseline
    )
    return SensitivityReport(
        scenario_id=judgments.scenario_id,
        epsilon=epsilon,
        trials=trials,
        seed=seed,
        top_k=top_k,
        items=items,
        item_meta={
            item.id: ItemMeta(item.id, item.name, item.category)
            for item in model.data_items
        },
    )
