"""Shared builders for randomized property tests.

Instances stay deliberately small (bounded streams/processes/decisions)
so thousand-instance sweeps still run in seconds.
"""

import random

import pytest

from dataprio.elicitation import (
    SUPPORT_VALUES,
    Assessor,
    ConsensusParameters,
    ScenarioJudgments,
    SupportJudgment,
    SwingJudgment,
    build_groups,
)
from dataprio.model import Analysis, DataItem, Decision, LinkingModel, Process, ValueStream

CATEGORIES = ("alpha", "beta", "gamma")


def make_random_model(
    rng: random.Random,
    max_vs: int = 4,
    max_proc: int = 5,
    max_dec: int = 6,
    max_items: int = 20,
    unlinked_rate: float = 0.2,
) -> LinkingModel:
    """Random valid model within the stated bounds.

    A fraction of decisions is left without analyses on purpose so the
    n_j = 0 path is always exercised.
    """
    n_items = rng.randint(2, max_items)
    items = tuple(
        DataItem(id=f"it{k:02d}", name=f"Item {k}", category=CATEGORIES[k % len(CATEGORIES)])
        for k in range(n_items)
    )
    item_ids = [it.id for it in items]

    streams = []
    analyses = []
    dec_counter = 0
    for v in range(rng.randint(1, max_vs)):
        procs = []
        for p in range(rng.randint(1, max_proc)):
            decs = []
            for _ in range(rng.randint(1, max_dec)):
                dec_counter += 1
                did = f"d{dec_counter:03d}"
                decs.append(Decision(id=did, text=f"Decision {dec_counter}"))
                if rng.random() >= unlinked_rate:
                    for s in range(rng.randint(1, 2)):
                        chosen = rng.sample(item_ids, k=rng.randint(1, min(3, n_items)))
                        analyses.append(
                            Analysis(
                                id=f"a-{did}-{s}",
                                name=f"Analysis {s} for {did}",
                                decision_id=did,
                                data_item_ids=tuple(chosen),
                            )
                        )
            procs.append(Process(id=f"v{v}p{p}", name=f"Process {v}.{p}", decisions=tuple(decs)))
        streams.append(ValueStream(id=f"v{v}", name=f"Stream {v}", processes=tuple(procs)))
    return LinkingModel(
        name="random model",
        value_streams=tuple(streams),
        analyses=tuple(analyses),
        data_items=items,
    )


def make_random_params(rng: random.Random, model: LinkingModel) -> ConsensusParameters:
    """Random consensus parameters covering every decision of the model."""
    decisions = model.decisions
    raw = [rng.uniform(0.01, 1.0) for _ in decisions]
    total = sum(raw)
    weights = {d.id: r / total for d, r in zip(decisions, raw)}
    supports = {}
    for d in decisions:
        # mix explicit zeros with the grid range
        supports[d.id] = 0.0 if rng.random() < 0.15 else rng.uniform(0.05, 0.9)
    return ConsensusParameters(decision_weights=weights, supports=supports)


def make_random_judgments(
    rng: random.Random,
    model: LinkingModel,
    scenario_id: str = "random-scenario",
    n_assessors: int | None = None,
) -> ScenarioJudgments:
    """Complete, valid judgments for every group and decision of the model."""
    if n_assessors is None:
        n_assessors = rng.randint(1, 3)
    assessors = tuple(Assessor(id=f"as{k}", role="participant") for k in range(n_assessors))

    swing_judgments = []
    for group in build_groups(model):
        for a in assessors:
            members = list(group.member_ids)
            reference = rng.choice(members)
            entries = {
                m: 100.0 if m == reference else round(rng.uniform(1.0, 100.0), 4)
                for m in members
            }
            swing_judgments.append(
                SwingJudgment(assessor_id=a.id, group_id=group.group_id, entries=entries)
            )

    labels = list(SUPPORT_VALUES)
    support_judgments = [
        SupportJudgment(assessor_id=a.id, decision_id=dec.id, label=rng.choice(labels))
        for a in assessors
        for _, _, dec in model.iter_decisions()
    ]
    return ScenarioJudgments(
        scenario_id=scenario_id,
        anchor_description="average performance to top 10%",
        assessors=assessors,
        swing_judgments=tuple(swing_judgments),
        support_judgments=tuple(support_judgments),
    )


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260821)
