"""Compare the pure-Python and compiled trial kernels on a large scenario.

Usage: python benchmarks/bench_backends.py [--trials N] [--assessors K]

Builds a synthetic organisation well past workshop scale, runs the same
perturbed trials through both backends, checks the outputs are
byte-identical, and reports wall time per trial and the speedup.
"""

import argparse
import random
import time

import numpy as np

from dataprio._kernels import has_native, trial_scores
from dataprio._kernels.plan import build_trial_plan
from dataprio.elicitation import (
    SUPPORT_VALUES,
    Assessor,
    ScenarioJudgments,
    SupportJudgment,
    SwingJudgment,
    build_groups,
)
from dataprio.model import Analysis, DataItem, Decision, LinkingModel, Process, ValueStream


def build_big_model(rng: random.Random) -> LinkingModel:
    # 8 streams x 6 processes x 8 decisions = 384 decisions, 150 items
    items = tuple(
        DataItem(f"item{k:03d}", f"Data item {k}", f"category-{k % 12}") for k in range(150)
    )
    item_ids = [it.id for it in items]
    streams = []
    analyses = []
    counter = 0
    for v in range(8):
        procs = []
        for p in range(6):
            decs = []
            for _ in range(8):
                counter += 1
                did = f"d{counter:04d}"
                decs.append(Decision(did, f"Decision {counter}?"))
                for s in range(2):
                    chosen = rng.sample(item_ids, k=rng.randint(2, 6))
                    analyses.append(
                        Analysis(f"a-{did}-{s}", f"Analysis {s}", did, tuple(chosen))
                    )
            procs.append(Process(f"v{v}p{p}", f"Process {v}.{p}", tuple(decs)))
        streams.append(ValueStream(f"v{v}", f"Stream {v}", tuple(procs)))
    return LinkingModel("benchmark model", tuple(streams), tuple(analyses), items)


def build_judgments(rng: random.Random, model: LinkingModel, n_assessors: int) -> ScenarioJudgments:
    assessors = tuple(Assessor(f"as{k}", "participant") for k in range(n_assessors))
    swings = []
    for group in build_groups(model):
        for a in assessors:
            members = list(group.member_ids)
            reference = rng.choice(members)
            entries = {
                m: 100.0 if m == reference else round(rng.uniform(5.0, 100.0), 2)
                for m in members
            }
            swings.append(SwingJudgment(a.id, group.group_id, entries))
    labels = [l for l in SUPPORT_VALUES if l != "no_support"]
    supports = [
        SupportJudgment(a.id, dec.id, rng.choice(labels))
        for a in assessors
        for _, _, dec in model.iter_decisions()
    ]
    return ScenarioJudgments("bench", "neutral to good", assessors, tuple(swings), tuple(supports))


def run(backend: str, plan, factor_pairs) -> tuple[float, np.ndarray]:
    accumulated = np.zeros(plan.n_items)
    start = time.perf_counter()
    for sf, df in factor_pairs:
        accumulated += trial_scores(plan, sf, df, backend=backend)
    elapsed = time.perf_counter() - start
    return elapsed, accumulated


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=300)
    parser.add_argument("--assessors", type=int, default=4)
    args = parser.parse_args()

    rng = random.Random(12)
    model = build_big_model(rng)
    judgments = build_judgments(rng, model, args.assessors)
    plan = build_trial_plan(model, judgments)
    print(
        f"plan: {plan.n_decisions} decisions, {plan.n_items} items, "
        f"{plan.n_entries} swing entries, {plan.n_supports} support votes"
    )

    gen = np.random.default_rng(99)
    factor_pairs = [
        (gen.uniform(0.8, 1.2, plan.n_entries), gen.uniform(0.8, 1.2, plan.n_supports))
        for _ in range(args.trials)
    ]

    pure_time, pure_total = run("pure", plan, factor_pairs)
    print(f"pure:   {args.trials} trials in {pure_time:.3f}s "
          f"({1000 * pure_time / args.trials:.2f} ms/trial)")

    if not has_native():
        print("native: not built, skipping comparison")
        return 0

    native_time, native_total = run("native", plan, factor_pairs)
    print(f"native: {args.trials} trials in {native_time:.3f}s "
          f"({1000 * native_time / args.trials:.2f} ms/trial)")

    assert pure_total.tobytes() == native_total.tobytes(), "backends disagree"
    print(f"outputs byte-identical; speedup {pure_time / native_time:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
