"""Swing weighting, consistency probes, and consensus aggregation."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dataprio.elicitation import (
    SUPPORT_VALUES,
    Assessor,
    ScenarioJudgments,
    SupportJudgment,
    SwingGroup,
    SwingJudgment,
    aggregate_group,
    aggregate_scenario,
    aggregate_support,
    build_groups,
    compose_weights,
    consistency_probe,
    normalize_swings,
    support_value,
    validate_swings,
)
from dataprio.errors import IncompleteScenarioError, InvariantError
from dataprio.fixtures import (
    load_demo_judgments,
    load_demo_model,
    load_demo_parameters,
)

from conftest import make_random_judgments, make_random_model

TOL = 1e-12

GROUP3 = SwingGroup("proc:p", ("ref", "j1", "j2"))


def judgment(entries, assessor="a", group="proc:p"):
    return SwingJudgment(assessor_id=assessor, group_id=group, entries=entries)


# The worked example everything else anchors on: raw swings 100/33/67
# normalize to 0.5/0.165/0.335 because the total is exactly 200.
def test_normalize_worked_example_exact():
    weights = normalize_swings(judgment({"ref": 100.0, "j1": 33.0, "j2": 67.0}))
    assert abs(weights["ref"] - 0.5) <= TOL
    assert abs(weights["j1"] - 0.165) <= TOL
    assert abs(weights["j2"] - 0.335) <= TOL
    assert abs(sum(weights.values()) - 1.0) <= TOL


def test_normalize_preserves_entry_order():
    weights = normalize_swings(judgment({"j2": 67.0, "ref": 100.0, "j1": 33.0}))
    assert list(weights) == ["j2", "ref", "j1"]


def test_normalize_single_member():
    assert normalize_swings(judgment({"only": 100.0})) == {"only": 1.0}


def test_normalize_rejects_bad_entries():
    with pytest.raises(InvariantError):
        normalize_swings(judgment({"ref": 100.0, "j1": 0.0}))
    with pytest.raises(InvariantError):
        normalize_swings(judgment({"ref": 100.0, "j1": -5.0}))
    with pytest.raises(InvariantError):
        normalize_swings(judgment({"ref": 100.0, "j1": float("nan")}))
    with pytest.raises(InvariantError):
        normalize_swings(judgment({}))


@settings(max_examples=60, deadline=None)
@given(
    values=st.lists(st.floats(min_value=0.5, max_value=100.0), min_size=1, max_size=6),
    scale=st.floats(min_value=0.01, max_value=50.0),
)
def test_normalize_scale_invariance(values, scale):
    base = {f"m{k}": v for k, v in enumerate(values)}
    scaled = {k: v * scale for k, v in base.items()}
    a = normalize_swings(judgment(base))
    b = normalize_swings(judgment(scaled))
    for k in base:
        assert abs(a[k] - b[k]) <= 1e-9


def test_validate_swings_happy_path():
    report = validate_swings(judgment({"ref": 100.0, "j1": 33.0, "j2": 67.0}), GROUP3)
    assert report.ok


def codes(report):
    return {v.code for v in report.violations}


def test_validate_swings_membership():
    assert "missing-member" in codes(validate_swings(judgment({"ref": 100.0}), GROUP3))
    bad = judgment({"ref": 100.0, "j1": 33.0, "j2": 67.0, "ghost": 10.0})
    assert "unknown-member" in codes(validate_swings(bad, GROUP3))


def test_validate_swings_ranges():
    bad = judgment({"ref": 100.0, "j1": 0.0, "j2": 67.0})
    assert "non-positive-swing" in codes(validate_swings(bad, GROUP3))
    bad = judgment({"ref": 100.0, "j1": -3.0, "j2": 67.0})
    assert "non-positive-swing" in codes(validate_swings(bad, GROUP3))
    bad = judgment({"ref": 101.0, "j1": 33.0, "j2": 67.0})
    assert "swing-above-100" in codes(validate_swings(bad, GROUP3))
    bad = judgment({"ref": 100.0, "j1": float("inf"), "j2": 67.0})
    assert "non-finite-swing" in codes(validate_swings(bad, GROUP3))


def test_validate_swings_requires_reference():
    bad = judgment({"ref": 50.0, "j1": 33.0, "j2": 40.0})
    assert codes(validate_swings(bad, GROUP3)) == {"no-reference-swing"}


def test_validate_swings_group_mismatch():
    other = judgment({"ref": 100.0}, group="proc:other")
    assert not validate_swings(other, GROUP3).ok


def test_probe_worked_example():
    j = judgment({"ref": 100.0, "j1": 33.0, "j2": 67.0})
    result = consistency_probe(j, {"j1", "j2"}, "ref")
    assert result.subset_sum == 100.0
    assert result.target_value == 100.0
    assert result.ratio == 1.0
    assert result.consistent


def test_probe_inconsistent():
    j = judgment({"ref": 100.0, "j1": 50.0, "j2": 70.0})
    result = consistency_probe(j, {"j1", "j2"}, "ref")
    assert abs(result.ratio - 1.2) <= TOL
    assert not result.consistent


def test_probe_rejects_bad_inputs():
    j = judgment({"ref": 100.0, "j1": 33.0, "j2": 67.0})
    with pytest.raises(ValueError):
        consistency_probe(j, set(), "ref")
    with pytest.raises(ValueError):
        consistency_probe(j, {"ref", "j1"}, "ref")
    with pytest.raises(ValueError):
        consistency_probe(j, {"nope"}, "ref")
    with pytest.raises(ValueError):
        consistency_probe(j, {"j1"}, "nope")


def test_aggregate_group_single_assessor_is_identity():
    weights = {"a": 0.5, "b": 0.165, "c": 0.335}
    out = aggregate_group([weights])
    assert out == weights
    assert out is not weights


def test_aggregate_group_two_assessors_geometric_mean():
    # independent oracle: sqrt of products, renormalized by hand
    a = {"x": 0.5, "y": 0.5}
    b = {"x": 0.2, "y": 0.8}
    gx = math.sqrt(0.5 * 0.2)
    gy = math.sqrt(0.5 * 0.8)
    expected_x = gx / (gx + gy)
    expected_y = gy / (gx + gy)
    out = aggregate_group([a, b])
    assert abs(out["x"] - expected_x) <= TOL
    assert abs(out["y"] - expected_y) <= TOL
    assert abs(sum(out.values()) - 1.0) <= TOL


def test_aggregate_group_permutation_invariance(rng):
    for _ in range(30):
        members = [f"m{k}" for k in range(rng.randint(2, 5))]
        mappings = []
        for _ in range(rng.randint(2, 4)):
            raw = [rng.uniform(0.05, 1.0) for _ in members]
            total = sum(raw)
            mappings.append({m: v / total for m, v in zip(members, raw)})
        base = aggregate_group(mappings)
        shuffled = mappings[:]
        rng.shuffle(shuffled)
        out = aggregate_group(shuffled)
        for m in members:
            assert abs(base[m] - out[m]) <= 1e-12


def test_aggregate_group_rejects_mismatched_members():
    with pytest.raises(ValueError):
        aggregate_group([{"x": 1.0}, {"y": 1.0}])
    with pytest.raises(ValueError):
        aggregate_group([])


def test_build_groups_order():
    model = load_demo_model()
    groups = build_groups(model)
    assert [g.group_id for g in groups] == ["vs", "vs:vs1", "proc:p1", "proc:p2"]
    assert groups[0].member_ids == ("vs1",)
    assert groups[2].member_ids == ("j1", "j2")


def test_compose_weights_demo():
    # 1 * 0.6 * 0.5 = 0.3 for j1/j2, 1 * 0.4 * 1.0 = 0.4 for j3
    sibling = {
        "vs": {"vs1": 1.0},
        "vs:vs1": {"p1": 0.6, "p2": 0.4},
        "proc:p1": {"j1": 0.5, "j2": 0.5},
        "proc:p2": {"j3": 1.0},
    }
    weights = compose_weights(sibling, load_demo_model())
    assert abs(weights["j1"] - 0.3) <= TOL
    assert abs(weights["j2"] - 0.3) <= TOL
    assert abs(weights["j3"] - 0.4) <= TOL
    assert list(weights) == ["j1", "j2", "j3"]


def test_compose_weights_missing_group():
    sibling = {"vs": {"vs1": 1.0}}
    with pytest.raises(IncompleteScenarioError) as err:
        compose_weights(sibling, load_demo_model())
    assert "vs:vs1" in err.value.missing_groups
    assert "proc:p1" in err.value.missing_groups


def test_compose_weights_rejects_bad_group_sum():
    sibling = {
        "vs": {"vs1": 1.0},
        "vs:vs1": {"p1": 0.6, "p2": 0.6},
        "proc:p1": {"j1": 0.5, "j2": 0.5},
        "proc:p2": {"j3": 1.0},
    }
    with pytest.raises(InvariantError):
        compose_weights(sibling, load_demo_model())


def test_support_grid_values():
    assert support_value("no_support") == 0.0
    assert support_value("almost_none") == 0.1
    assert support_value("low") == 0.3
    assert support_value("medium") == 0.5
    assert support_value("high") == 0.7
    assert support_value("almost_sufficient") == 0.9
    assert len(SUPPORT_VALUES) == 6
    with pytest.raises(ValueError):
        support_value("plenty")


def test_aggregate_support_policies():
    assert aggregate_support([0.7]) == 0.7
    assert abs(aggregate_support([0.3, 0.7]) - math.sqrt(0.3 * 0.7)) <= TOL
    # strict: one abstention zeroes the consensus
    assert aggregate_support([0.7, 0.0, 0.9], policy="strict") == 0.0
    got = aggregate_support([0.7, 0.0, 0.9], policy="exclude_zeros")
    assert abs(got - math.sqrt(0.7 * 0.9)) <= TOL
    assert aggregate_support([0.0, 0.0], policy="exclude_zeros") == 0.0
    with pytest.raises(ValueError):
        aggregate_support([])
    with pytest.raises(ValueError):
        aggregate_support([0.5], policy="median")


def test_scenario_rejects_duplicate_judgments():
    with pytest.raises(InvariantError):
        ScenarioJudgments(
            scenario_id="s",
            anchor_description="anchor",
            assessors=(Assessor("a"),),
            swing_judgments=(
                SwingJudgment("a", "vs", {"vs1": 100.0}),
                SwingJudgment("a", "vs", {"vs1": 100.0}),
            ),
            support_judgments=(),
        )
    with pytest.raises(InvariantError):
        ScenarioJudgments(
            scenario_id="s",
            anchor_description="anchor",
            assessors=(Assessor("a"),),
            swing_judgments=(),
            support_judgments=(
                SupportJudgment("a", "j1", "low"),
                SupportJudgment("a", "j1", "high"),
            ),
        )


def test_aggregate_scenario_demo_matches_published_parameters():
    model = load_demo_model()
    params = aggregate_scenario(model, load_demo_judgments())
    expected = load_demo_parameters()
    for row in expected.rows:
        assert abs(params.decision_weights[row.decision_id] - row.weight) <= 1e-9
        assert abs(params.supports[row.decision_id] - row.support) <= 1e-9
    assert abs(sum(params.decision_weights.values()) - 1.0) <= 1e-9


def test_aggregate_scenario_reports_all_gaps():
    model = load_demo_model()
    base = load_demo_judgments()
    gappy = ScenarioJudgments(
        scenario_id="gappy",
        anchor_description=base.anchor_description,
        assessors=base.assessors,
        swing_judgments=tuple(j for j in base.swing_judgments if j.group_id != "proc:p2"),
        support_judgments=tuple(s for s in base.support_judgments if s.decision_id != "j2"),
    )
    with pytest.raises(IncompleteScenarioError) as err:
        aggregate_scenario(model, gappy)
    assert err.value.missing_groups == ("proc:p2",)
    assert err.value.missing_supports == ("j2",)


def test_aggregate_scenario_rejects_unknown_references():
    model = load_demo_model()
    base = load_demo_judgments()
    bad = ScenarioJudgments(
        scenario_id="bad",
        anchor_description=base.anchor_description,
        assessors=base.assessors,
        swing_judgments=base.swing_judgments + (SwingJudgment("ghost", "vs", {"vs1": 100.0}),),
        support_judgments=base.support_judgments + (SupportJudgment("p1", "j9", "low"),),
    )
    with pytest.raises(InvariantError) as err:
        aggregate_scenario(model, bad)
    found = {v.code for v in err.value.violations}
    assert "unknown-assessor" in found
    assert "unknown-decision" in found


def test_aggregate_scenario_random_instances_sum_to_one(rng):
    for _ in range(20):
        model = make_random_model(rng)
        judgments = make_random_judgments(rng, model)
        params = aggregate_scenario(model, judgments)
        assert abs(sum(params.decision_weights.values()) - 1.0) <= 1e-9
        for dec in model.decisions:
            assert 0.0 <= params.supports[dec.id] <= 0.9
