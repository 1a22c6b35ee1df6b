"""Linking model construction, validation, incidence, and coverage."""

import pytest

from dataprio.errors import InvariantError
from dataprio.fixtures import load_demo_model, load_hr_fixture
from dataprio.model import (
    Analysis,
    DataItem,
    Decision,
    LinkingModel,
    Process,
    ValueStream,
    coverage_report,
    derive_incidence,
    validate_model,
)

from conftest import make_random_model


def small_model(**overrides) -> LinkingModel:
    """The three-decision demo shape, editable per test."""
    fields = dict(
        name="small",
        value_streams=(
            ValueStream(
                id="vs1",
                name="Stream",
                processes=(
                    Process(
                        id="p1",
                        name="Planning",
                        decisions=(Decision("j1", "first?"), Decision("j2", "second?")),
                    ),
                    Process(id="p2", name="Review", decisions=(Decision("j3", "third?"),)),
                ),
            ),
        ),
        analyses=(
            Analysis("a1", "headcount", "j1", ("A", "B")),
            Analysis("a2", "tenure", "j3", ("A", "C")),
        ),
        data_items=(
            DataItem("A", "Location", "personal"),
            DataItem("B", "Competences", "skills"),
            DataItem("C", "Ramp-up time", "hiring"),
        ),
    )
    fields.update(overrides)
    return LinkingModel(**fields)


def codes(model):
    return sorted(v.code for v in validate_model(model).violations)


def test_valid_model_passes():
    report = validate_model(small_model())
    assert report.ok
    assert report.violations == ()


def test_demo_fixture_is_valid():
    assert validate_model(load_demo_model()).ok


def test_duplicate_value_stream_id():
    vs = small_model().value_streams[0]
    clone = ValueStream(id="vs1", name="Again", processes=vs.processes)
    # duplicate vs id also duplicates every nested process/decision id
    bad = small_model(value_streams=(vs, clone))
    found = codes(bad)
    assert "duplicate-identifier" in found


def test_duplicate_decision_id_across_processes():
    bad = small_model(
        value_streams=(
            ValueStream(
                id="vs1",
                name="Stream",
                processes=(
                    Process(id="p1", name="One", decisions=(Decision("j1", "x"),)),
                    Process(id="p2", name="Two", decisions=(Decision("j1", "y"),)),
                ),
            ),
        ),
        analyses=(),
    )
    assert "duplicate-identifier" in codes(bad)


def test_empty_identifier_flagged():
    bad = small_model(data_items=(DataItem("", "Nameless", "cat"),))
    found = codes(bad)
    assert "empty-identifier" in found
    # analyses now dangle on items A/B/C too
    assert "dangling-item" in found


def test_empty_model_and_children():
    assert codes(LinkingModel("x", (), (), ())) == ["empty-model"]
    bad = small_model(
        value_streams=(ValueStream(id="vs1", name="Stream", processes=()),), analyses=()
    )
    assert "empty-children" in codes(bad)
    bad = small_model(
        value_streams=(
            ValueStream(
                id="vs1",
                name="Stream",
                processes=(Process(id="p1", name="One", decisions=()),),
            ),
        ),
        analyses=(),
    )
    assert "empty-children" in codes(bad)


def test_dangling_references():
    bad = small_model(analyses=(Analysis("a1", "x", "nope", ("A",)),))
    assert "dangling-decision" in codes(bad)
    bad = small_model(analyses=(Analysis("a1", "x", "j1", ("ghost",)),))
    assert "dangling-item" in codes(bad)


def test_analysis_without_items():
    bad = small_model(analyses=(Analysis("a1", "x", "j1", ()),))
    assert "no-items" in codes(bad)


def test_empty_category():
    bad = small_model(
        data_items=(
            DataItem("A", "Location", ""),
            DataItem("B", "Competences", "skills"),
            DataItem("C", "Ramp-up time", "hiring"),
        )
    )
    assert "empty-category" in codes(bad)


def test_all_violations_collected_at_once():
    bad = small_model(
        value_streams=(ValueStream(id="vs1", name="Stream", processes=()),),
        analyses=(Analysis("a1", "x", "gone", ()),),
        data_items=(DataItem("A", "Location", ""),),
    )
    found = codes(bad)
    assert {"empty-children", "dangling-decision", "no-items", "empty-category"} <= set(found)


def test_raise_if_failed_carries_violations():
    bad = small_model(analyses=(Analysis("a1", "x", "nope", ("A",)),))
    with pytest.raises(InvariantError) as err:
        validate_model(bad).raise_if_failed()
    assert err.value.violations
    assert "dangling decision" in str(err.value)


def test_incidence_demo_fanout():
    # demo links: j1 -> {A,B}, j2 -> {}, j3 -> {A,C}
    inc = derive_incidence(load_demo_model())
    assert inc.fanout == {"j1": 2, "j2": 0, "j3": 2}
    assert inc.links["j1"] == ("A", "B")
    assert inc.links["j2"] == ()
    assert inc.phi("j1", "A") == 1
    assert inc.phi("j1", "C") == 0
    assert inc.phi("j2", "A") == 0


def test_incidence_set_semantics_and_item_order():
    m = small_model(
        analyses=(
            Analysis("a1", "x", "j1", ("B", "A", "B")),
            Analysis("a2", "y", "j1", ("A", "C")),
        )
    )
    inc = derive_incidence(m)
    # duplicates collapse; ordering follows the model's item declaration order
    assert inc.links["j1"] == ("A", "B", "C")
    assert inc.fanout["j1"] == 3


def test_incidence_rejects_invalid_model():
    bad = small_model(analyses=(Analysis("a1", "x", "nope", ("A",)),))
    with pytest.raises(InvariantError):
        derive_incidence(bad)


def test_iteration_orders_follow_document_order():
    m = small_model()
    assert [d.id for d in m.decisions] == ["j1", "j2", "j3"]
    assert [(vs.id, p.id) for vs, p in m.iter_processes()] == [("vs1", "p1"), ("vs1", "p2")]
    assert [d.id for _, _, d in m.iter_decisions()] == ["j1", "j2", "j3"]


def test_coverage_counts_small():
    stats = coverage_report(small_model())
    assert stats.decisions_per_process == {"p1": 2, "p2": 1}
    assert stats.analyses_per_process == {"p1": 1, "p2": 1}
    assert stats.items_per_category == {"personal": 1, "skills": 1, "hiring": 1}
    assert stats.total_decisions == 3
    assert stats.total_items == 3


def test_coverage_hr_fixture_structure():
    fixture = load_hr_fixture()
    model = fixture.model
    assert model.synthetic is True
    assert len(model.value_streams) == 6
    stats = coverage_report(model)
    assert len(stats.decisions_per_process) == 25
    assert stats.total_decisions == 55
    assert len(stats.items_per_category) == 16
    assert stats.total_items == sum(stats.items_per_category.values())


def test_hr_fixture_every_item_linked():
    inc = derive_incidence(load_hr_fixture().model)
    linked = {item for items in inc.links.values() for item in items}
    assert linked == set(inc.item_ids)


def test_random_models_always_validate(rng):
    for _ in range(50):
        model = make_random_model(rng)
        assert validate_model(model).ok
        inc = derive_incidence(model)
        assert set(inc.decision_ids) == {d.id for d in model.decisions}
