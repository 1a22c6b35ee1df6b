"""Swing-weight and data-support elicitation.

Weights are elicited per sibling group: value streams against each other,
processes within their value stream, decisions within their process. Each
assessor names the most important swing in a group (provisionally 100%) and
rates the others relative to it; normalised judgments are combined across
assessors by geometric mean and renormalised. Data support is graded per
decision on a six-step scale and combined the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import IncompleteScenarioError, InvariantError
from .model import LinkingModel, ValidationReport, Violation, validate_model

__all__ = [
    "SUPPORT_VALUES",
    "PROBE_TOLERANCE",
    "WEIGHT_SUM_TOLERANCE",
    "Assessor",
    "SwingGroup",
    "SwingJudgment",
    "SupportJudgment",
    "ScenarioJudgments",
    "ConsensusParameters",
    "ProbeResult",
    "build_groups",
    "validate_swings",
    "normalize_swings",
    "consistency_probe",
    "aggregate_group",
    "compose_weights",
    "support_value",
    "aggregate_support",
    "aggregate_scenario",
]

# Six-step support scale. The top grade is deliberately 90%: available data
# never fully answers a business decision on its own.
SUPPORT_VALUES: dict[str, float] = {
    "no_support": 0.0,
    "almost_none": 0.1,
    "low": 0.3,
    "medium": 0.5,
    "high": 0.7,
    "almost_sufficient": 0.9,
}

PROBE_TOLERANCE = 1e-9
WEIGHT_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Assessor:
    id: str
    role: str = ""


@dataclass(frozen=True)
class SwingGroup:
    """One sibling group whose members are weighted against each other.

    Group ids encode the level: ``"vs"`` for the value streams, ``"vs:X"``
    for the processes of value stream X, ``"proc:Y"`` for the decisions of
    process Y.
    """

    group_id: str
    member_ids: tuple[str, ...]


@dataclass(frozen=True)
class SwingJudgment:
    """One assessor's provisional swing percentages for one group.

    Valid entries lie in (0, 100] with at least one entry at exactly 100
    (the assessor's most important swing, the reference).
    """

    assessor_id: str
    group_id: str
    entries: dict[str, float]


@dataclass(frozen=True)
class SupportJudgment:
    assessor_id: str
    decision_id: str
    label: str


@dataclass(frozen=True)
class ScenarioJudgments:
    """All judgments collected for one elicitation scenario.

    ``anchor_description`` records what the swing ran between (for example
    "average performance to top 10%", or a from-now-to-wanted variant); it
    labels the scenario and never changes any computation.
    """

    scenario_id: str
    anchor_description: str
    assessors: tuple[Assessor, ...]
    swing_judgments: tuple[SwingJudgment, ...]
    support_judgments: tuple[SupportJudgment, ...]

    def __post_init__(self):
        seen: set[tuple[str, str]] = set()
        for j in self.swing_judgments:
            key = (j.assessor_id, j.group_id)
            if key in seen:
                raise InvariantError(
                    [
                        Violation(
                            "duplicate-judgment",
                            f"swing[{j.assessor_id}/{j.group_id}]",
                            "assessor judged this group more than once",
                        )
                    ]
                )
            seen.add(key)
        seen_support: set[tuple[str, str]] = set()
        for s in self.support_judgments:
            key = (s.assessor_id, s.decision_id)
            if key in seen_support:
                raise InvariantError(
                    [
                        Violation(
                            "duplicate-judgment",
                            f"support[{s.assessor_id}/{s.decision_id}]",
                            "assessor graded this decision more than once",
                        )
                    ]
                )
            seen_support.add(key)


@dataclass(frozen=True)
class ConsensusParameters:
    """Aggregated weights and supports, ready for scoring.

    ``sibling_weights`` is None when the parameters were imported from an
    already-aggregated table that does not publish the per-level weights.
    """

    decision_weights: dict[str, float]
    supports: dict[str, float]
    sibling_weights: dict[str, dict[str, float]] | None = None


@dataclass(frozen=True)
class ProbeResult:
    """Additive consistency probe: a bundle of swings versus one target swing.

    ratio 1.0 means the assessor's judgments are additively consistent for
    the probed ids. The engine only reports; it never adjusts judgments.
    """

    subset_sum: float
    target_value: float
    ratio: float

    @property
    def consistent(self) -> bool:
        return abs(self.ratio - 1.0) <= PROBE_TOLERANCE


def build_groups(model: LinkingModel) -> tuple[SwingGroup, ...]:
    """Enumerate every sibling group of the model in hierarchy order."""
    groups = [SwingGroup("vs", tuple(vs.id for vs in model.value_streams))]
    for vs in model.value_streams:
        groups.append(SwingGroup(f"vs:{vs.id}", tuple(p.id for p in vs.processes)))
    for _, proc in model.iter_processes():
        groups.append(SwingGroup(f"proc:{proc.id}", tuple(d.id for d in proc.decisions)))
    return tuple(groups)


def validate_swings(judgment: SwingJudgment, group: SwingGroup) -> ValidationReport:
    """Check one judgment against its group. Collects every violation."""
    out: list[Violation] = []
    loc = f"swing[{judgment.assessor_id}/{judgment.group_id}]"

    if judgment.group_id != group.group_id:
        out.append(
            Violation(
                "group-mismatch",
                loc,
                f"judgment is for group {judgment.group_id!r}, not {group.group_id!r}",
            )
        )

    members = set(group.member_ids)
    for member in group.member_ids:
        if member not in judgment.entries:
            out.append(Violation("missing-member", loc, f"no entry for member {member!r}"))
    for member, value in judgment.entries.items():
        if member not in members:
            out.append(Violation("unknown-member", loc, f"entry for unknown member {member!r}"))
            continue
        if not math.isfinite(value):
            out.append(Violation("non-finite-swing", loc, f"entry for {member!r} is not finite"))
        elif value <= 0:
            out.append(Violation("non-positive-swing", loc, f"entry for {member!r} must be > 0"))
        elif value > 100:
            out.append(Violation("swing-above-100", loc, f"entry for {member!r} exceeds 100"))

    # Reference check only once the individual entries look sane.
    if not out and not any(v == 100 for v in judgment.entries.values()):
        out.append(
            Violation("no-reference-swing", loc, "no entry equals 100 (the most important swing)")
        )
    return ValidationReport(tuple(out))


def normalize_swings(judgment: SwingJudgment) -> dict[str, float]:
    """Scale provisional percentages so they sum to 1.

    Only positivity is required here, so the result is invariant under
    rescaling all entries by a common factor; the 100%-reference rule is
    enforced by validate_swings before judgments enter a scenario.
    """
    if not judgment.entries:
        raise InvariantError(
            [Violation("empty-judgment", f"swing[{judgment.assessor_id}/{judgment.group_id}]", "judgment has no entries")]
        )
    bad = [
        Violation(
            "non-positive-swing",
            f"swing[{judgment.assessor_id}/{judgment.group_id}]",
            f"entry for {m!r} must be a positive finite number",
        )
        for m, v in judgment.entries.items()
        if not math.isfinite(v) or v <= 0
    ]
    if bad:
        raise InvariantError(bad)

    total = 0.0
    for value in judgment.entries.values():
        total += value
    return {member: value / total for member, value in judgment.entries.items()}


def consistency_probe(
    judgment: SwingJudgment, subset: set[str], target: str
) -> ProbeResult:
    """Compare the summed swings of ``subset`` against the swing of ``target``."""
    if not subset:
        raise ValueError("probe subset is empty")
    if target in subset:
        raise ValueError("probe target cannot be part of the subset")
    unknown = [m for m in sorted(subset | {target}) if m not in judgment.entries]
    if unknown:
        raise ValueError(f"probe ids not in judgment: {', '.join(unknown)}")

    # Sum in the judgment's entry order so the result does not depend on
    # the set's iteration order.
    subset_sum = 0.0
    for member, value in judgment.entries.items():
        if member in subset:
            subset_sum += value
    target_value = judgment.entries[target]
    return ProbeResult(subset_sum, target_value, subset_sum / target_value)


def aggregate_group(normalized: list[dict[str, float]]) -> dict[str, float]:
    """Combine per-assessor normalised weights for one group.

    Geometric mean per member, renormalised to sum 1. A single assessor's
    weights pass through unchanged.
    """
    if not normalized:
        raise ValueError("no assessor weights to aggregate")
    first = normalized[0]
    members = list(first)
    member_set = set(members)
    for mapping in normalized[1:]:
        if set(mapping) != member_set:
            raise ValueError("assessor weight mappings cover different members")

    if len(normalized) == 1:
        return dict(first)

    exponent = 1.0 / len(normalized)
    means: dict[str, float] = {}
    for member in members:
        prod = 1.0
        for mapping in normalized:
            prod *= mapping[member]
        means[member] = prod**exponent

    total = 0.0
    for member in members:
        total += means[member]
    return {member: means[member] / total for member in members}


def compose_weights(
    sibling_weights: dict[str, dict[str, float]], model: LinkingModel
) -> dict[str, float]:
    """Multiply the three levels of sibling weights into per-decision weights.

    Because every group's weights sum to 1, the products over all decisions
    telescope to 1 as well; both are checked.
    """
    groups = build_groups(model)
    missing = [g.group_id for g in groups if g.group_id not in sibling_weights]
    if missing:
        raise IncompleteScenarioError(missing_groups=missing)

    violations: list[Violation] = []
    for group in groups:
        weights = sibling_weights[group.group_id]
        if set(weights) != set(group.member_ids):
            violations.append(
                Violation(
                    "member-mismatch",
                    f"group[{group.group_id}]",
                    "weights do not cover exactly the group members",
                )
            )
            continue
        total = sum(weights[m] for m in group.member_ids)
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            violations.append(
                Violation(
                    "group-sum",
                    f"group[{group.group_id}]",
                    f"group weights sum to {total!r}, expected 1",
                )
            )
    if violations:
        raise InvariantError(violations)

    vs_weights = sibling_weights["vs"]
    decision_weights: dict[str, float] = {}
    for vs in model.value_streams:
        proc_weights = sibling_weights[f"vs:{vs.id}"]
        for proc in vs.processes:
            dec_weights = sibling_weights[f"proc:{proc.id}"]
            for dec in proc.decisions:
                decision_weights[dec.id] = (
                    vs_weights[vs.id] * proc_weights[proc.id]
                ) * dec_weights[dec.id]

    total = 0.0
    for dec_id in decision_weights:
        total += decision_weights[dec_id]
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise InvariantError(
            [Violation("weight-sum", "model", f"decision weights sum to {total!r}, expected 1")]
        )
    return decision_weights


def support_value(label: str) -> float:
    if label not in SUPPORT_VALUES:
        known = ", ".join(SUPPORT_VALUES)
        raise ValueError(f"unknown support label {label!r} (expected one of: {known})")
    return SUPPORT_VALUES[label]


def aggregate_support(values: list[float], policy: str = "strict") -> float:
    """Geometric mean of per-assessor support values for one decision.

    strict: any zero makes the consensus zero (the literal geometric mean).
    exclude_zeros: zeros are dropped first; zero only when all votes are zero.
    """
    if not values:
        raise ValueError("no support values to aggregate")
    if policy not in ("strict", "exclude_zeros"):
        raise ValueError(f"unknown support policy {policy!r}")

    if policy == "strict":
        for v in values:
            if v == 0.0:
                return 0.0
        pool = values
    else:
        pool = [v for v in values if v > 0.0]
        if not pool:
            return 0.0

    if len(pool) == 1:
        return pool[0]
    prod = 1.0
    for v in pool:
        prod *= v
    return prod ** (1.0 / len(pool))


def aggregate_scenario(
    model: LinkingModel,
    judgments: ScenarioJudgments,
    support_policy: str = "strict",
) -> ConsensusParameters:
    """Aggregate a full scenario into consensus weights and supports.

    Every sibling group needs at least one swing judgment and every decision
    at least one support grade; anything missing is reported in one
    IncompleteScenarioError so a workshop facilitator sees the whole gap list.
    """
    validate_model(model).raise_if_failed()
    groups = build_groups(model)
    groups_by_id = {g.group_id: g for g in groups}
    known_assessors = {a.id for a in judgments.assessors}
    known_decisions = {dec.id for dec in model.decisions}

    violations: list[Violation] = []
    per_group: dict[str, list[dict[str, float]]] = {g.group_id: [] for g in groups}
    for judgment in judgments.swing_judgments:
        loc = f"swing[{judgment.assessor_id}/{judgment.group_id}]"
        if judgment.assessor_id not in known_assessors:
            violations.append(
                Violation("unknown-assessor", loc, f"assessor {judgment.assessor_id!r} not declared")
            )
        group = groups_by_id.get(judgment.group_id)
        if group is None:
            violations.append(
                Violation("unknown-group", loc, f"group {judgment.group_id!r} not in model")
            )
            continue
        report = validate_swings(judgment, group)
        violations.extend(report.violations)
        if report.ok:
            normalized = normalize_swings(judgment)
            # Fix member order to the group's order so aggregation is
            # independent of entry order in the submitted judgment.
            per_group[group.group_id].append({m: normalized[m] for m in group.member_ids})

    per_decision: dict[str, list[float]] = {dec_id: [] for dec_id in known_decisions}
    for support in judgments.support_judgments:
        loc = f"support[{support.assessor_id}/{support.decision_id}]"
        if support.assessor_id not in known_assessors:
            violations.append(
                Violation("unknown-assessor", loc, f"assessor {support.assessor_id!r} not declared")
            )
        if support.decision_id not in known_decisions:
            violations.append(
                Violation("unknown-decision", loc, f"decision {support.decision_id!r} not in model")
            )
            continue
        if support.label not in SUPPORT_VALUES:
            violations.append(Violation("unknown-label", loc, f"unknown support label {support.label!r}"))
            continue
        per_decision[support.decision_id].append(SUPPORT_VALUES[support.label])

    if violations:
        raise InvariantError(violations)

    missing_groups = [g.group_id for g in groups if not per_group[g.group_id]]
    missing_supports = [dec.id for dec in model.decisions if not per_decision[dec.id]]
    if missing_groups or missing_supports:
        raise IncompleteScenarioError(missing_groups, missing_supports)

    sibling_weights = {
        g.group_id: aggregate_group(per_group[g.group_id]) for g in groups
    }
    decision_weights = compose_weights(sibling_weights, model)
    supports = {
        dec.id: aggregate_support(per_decision[dec.id], support_policy)
        for dec in model.decisions
    }
    return ConsensusParameters(
        decision_weights=decision_weights,
        supports=supports,
        sibling_weights=sibling_weights,
    )
