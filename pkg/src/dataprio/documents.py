"""JSON document formats for models, judgments, parameters and reports.

Three failure layers, reported through distinct error types so callers can
map them to exit codes or HTTP statuses: ParseError for broken JSON (with
line/column), SchemaError for wrong shapes (with a JSON path), and
InvariantError for documents that parse cleanly but break domain rules.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .elicitation import (
    SUPPORT_VALUES,
    Assessor,
    ConsensusParameters,
    ScenarioJudgments,
    SupportJudgment,
    SwingGroup,
    SwingJudgment,
    validate_swings,
)
from .errors import InvariantError, ParseError, SchemaError
from .model import (
    Analysis,
    DataItem,
    Decision,
    LinkingModel,
    Process,
    ValueStream,
    Violation,
    validate_model,
)
from .scoring import (
    ItemMeta,
    ItemSensitivity,
    PriorityReport,
    RankEntry,
    SensitivityReport,
)

__all__ = [
    "ParameterRow",
    "AggregatedParameters",
    "import_document",
    "export_document",
    "resolve_parameters",
    "export_report",
    "import_report",
    "model_to_dict",
    "judgments_to_dict",
    "aggregated_to_dict",
    "priority_report_to_dict",
    "sensitivity_report_to_dict",
]

WEIGHT_SUM_IMPORT_TOLERANCE = 0.01  # published tables carry rounding residue


@dataclass(frozen=True)
class ParameterRow:
    decision_id: str
    weight: float
    support: float


@dataclass(frozen=True)
class AggregatedParameters:
    """Already-aggregated per-decision weights and supports.

    This is the shortcut past elicitation for published consensus tables;
    per-level sibling weights are not part of it.
    """

    rows: tuple[ParameterRow, ...]

    @property
    def weight_sum(self) -> float:
        return sum(row.weight for row in self.rows)


def _parse_json(data: bytes | str):
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not valid UTF-8: {exc}") from exc

    def reject_constant(token: str):
        raise ParseError(f"non-finite number {token} is not allowed")

    try:
        return json.loads(data, parse_constant=reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _require(obj: dict, key: str, kind, path: str):
    if not isinstance(obj, dict):
        raise SchemaError(path, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise SchemaError(path, f"missing required key {key!r}")
    return _typed(obj[key], kind, f"{path}.{key}")


def _typed(value, kind, path: str):
    if kind is float:
        # bool is an int subclass; numbers must be real numbers
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(path, f"expected a number, got {type(value).__name__}")
        return float(value)
    if kind is str:
        if not isinstance(value, str):
            raise SchemaError(path, f"expected a string, got {type(value).__name__}")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise SchemaError(path, f"expected an array, got {type(value).__name__}")
        return value
    if kind is dict:
        if not isinstance(value, dict):
            raise SchemaError(path, f"expected an object, got {type(value).__name__}")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise SchemaError(path, f"expected a boolean, got {type(value).__name__}")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(path, f"expected an integer, got {type(value).__name__}")
        return value
    raise AssertionError(kind)


def _model_from_dict(doc, path: str = "$") -> LinkingModel:
    name = _require(doc, "name", str, path)
    synthetic = _typed(doc.get("synthetic", False), bool, f"{path}.synthetic")

    streams = []
    for v, vs_doc in enumerate(_require(doc, "valueStreams", list, path)):
        vs_path = f"{path}.valueStreams[{v}]"
        processes = []
        for p, proc_doc in enumerate(_require(vs_doc, "processes", list, vs_path)):
            proc_path = f"{vs_path}.processes[{p}]"
            decisions = []
            for d, dec_doc in enumerate(_require(proc_doc, "decisions", list, proc_path)):
                dec_path = f"{proc_path}.decisions[{d}]"
                decisions.append(
                    Decision(
                        id=_require(dec_doc, "id", str, dec_path),
                        text=_require(dec_doc, "text", str, dec_path),
                    )
                )
            processes.append(
                Process(
                    id=_require(proc_doc, "id", str, proc_path),
                    name=_require(proc_doc, "name", str, proc_path),
                    decisions=tuple(decisions),
                )
            )
        streams.append(
            ValueStream(
                id=_require(vs_doc, "id", str, vs_path),
                name=_require(vs_doc, "name", str, vs_path),
                processes=tuple(processes),
            )
        )

    items = []
    for i, item_doc in enumerate(_require(doc, "dataItems", list, path)):
        item_path = f"{path}.dataItems[{i}]"
        items.append(
            DataItem(
                id=_require(item_doc, "id", str, item_path),
                name=_require(item_doc, "name", str, item_path),
                category=_require(item_doc, "category", str, item_path),
            )
        )

    analyses = []
    for a, a_doc in enumerate(_require(doc, "analyses", list, path)):
        a_path = f"{path}.analyses[{a}]"
        item_ids = [
            _typed(x, str, f"{a_path}.dataItemIds[{k}]")
            for k, x in enumerate(_require(a_doc, "dataItemIds", list, a_path))
        ]
        analyses.append(
            Analysis(
                id=_require(a_doc, "id", str, a_path),
                name=_require(a_doc, "name", str, a_path),
                decision_id=_require(a_doc, "decisionId", str, a_path),
                data_item_ids=tuple(item_ids),
            )
        )

    model = LinkingModel(
        name=name,
        value_streams=tuple(streams),
        analyses=tuple(analyses),
        data_items=tuple(items),
        synthetic=synthetic,
    )
    validate_model(model).raise_if_failed()
    return model


def _judgments_from_dict(doc, path: str = "$") -> ScenarioJudgments:
    scenario = _require(doc, "scenario", str, path)
    anchor = _require(doc, "anchor", str, path)

    assessors = []
    for a, a_doc in enumerate(_require(doc, "assessors", list, path)):
        a_path = f"{path}.assessors[{a}]"
        role = _typed(a_doc.get("role", ""), str, f"{a_path}.role") if isinstance(a_doc, dict) else ""
        assessors.append(Assessor(id=_require(a_doc, "id", str, a_path), role=role))

    swings = []
    violations: list[Violation] = []
    for s, s_doc in enumerate(_require(doc, "swingJudgments", list, path)):
        s_path = f"{path}.swingJudgments[{s}]"
        entries_doc = _require(s_doc, "entries", dict, s_path)
        entries = {
            member: _typed(value, float, f"{s_path}.entries.{member}")
            for member, value in entries_doc.items()
        }
        judgment = SwingJudgment(
            assessor_id=_require(s_doc, "assessorId", str, s_path),
            group_id=_require(s_doc, "groupId", str, s_path),
            entries=entries,
        )
        # Model-independent invariants: range and the 100% reference. The
        # judgment's own entries stand in for the member list; membership
        # against the model is checked at aggregation time.
        stand_in = SwingGroup(judgment.group_id, tuple(entries))
        violations.extend(validate_swings(judgment, stand_in).violations)
        swings.append(judgment)

    supports = []
    for s, s_doc in enumerate(_require(doc, "supportJudgments", list, path)):
        s_path = f"{path}.supportJudgments[{s}]"
        label = _require(s_doc, "label", str, s_path)
        if label not in SUPPORT_VALUES:
            violations.append(
                Violation("unknown-label", s_path, f"unknown support label {label!r}")
            )
        supports.append(
            SupportJudgment(
                assessor_id=_require(s_doc, "assessorId", str, s_path),
                decision_id=_require(s_doc, "decisionId", str, s_path),
                label=label,
            )
        )

    if violations:
        raise InvariantError(violations)
    return ScenarioJudgments(
        scenario_id=scenario,
        anchor_description=anchor,
        assessors=tuple(assessors),
        swing_judgments=tuple(swings),
        support_judgments=tuple(supports),
    )


def _aggregated_from_dict(doc, path: str = "$") -> AggregatedParameters:
    rows = []
    violations: list[Violation] = []
    seen: set[str] = set()
    for r, row_doc in enumerate(_require(doc, "decisions", list, path)):
        r_path = f"{path}.decisions[{r}]"
        row = ParameterRow(
            decision_id=_require(row_doc, "decisionId", str, r_path),
            weight=_require(row_doc, "weight", float, r_path),
            support=_require(row_doc, "support", float, r_path),
        )
        if row.decision_id in seen:
            violations.append(
                Violation("duplicate-row", r_path, f"duplicate decision {row.decision_id!r}")
            )
        seen.add(row.decision_id)
        if not 0.0 <= row.weight <= 1.0:
            violations.append(
                Violation("weight-range", r_path, f"weight {row.weight!r} outside [0, 1]")
            )
        if not 0.0 <= row.support <= 1.0:
            violations.append(
                Violation("support-range", r_path, f"support {row.support!r} outside [0, 1]")
            )
        rows.append(row)

    total = sum(row.weight for row in rows)
    if abs(total - 1.0) > WEIGHT_SUM_IMPORT_TOLERANCE:
        violations.append(
            Violation(
                "weight-sum",
                path,
                f"weights sum outside tolerance: {total!r} vs 1 +- {WEIGHT_SUM_IMPORT_TOLERANCE}",
            )
        )
    if violations:
        raise InvariantError(violations)
    return AggregatedParameters(tuple(rows))


_IMPORTERS = {
    "model": _model_from_dict,
    "judgments": _judgments_from_dict,
    "aggregated": _aggregated_from_dict,
}


def import_document(kind: str, data: bytes | str):
    """Parse and validate one document. kind: model, judgments or aggregated."""
    if kind not in _IMPORTERS:
        raise ValueError(f"unknown document kind {kind!r}")
    return _IMPORTERS[kind](_parse_json(data))


def resolve_parameters(
    doc: AggregatedParameters, model: LinkingModel
) -> ConsensusParameters:
    """Bind an aggregated table to a model, requiring an exact decision cover."""
    model_ids = [dec.id for dec in model.decisions]
    doc_ids = {row.decision_id for row in doc.rows}
    missing = [d for d in model_ids if d not in doc_ids]
    extra = sorted(doc_ids - set(model_ids))
    violations = [
        Violation("missing-decision", f"decision[{d}]", "no parameter row for this decision")
        for d in missing
    ] + [
        Violation("unknown-decision", f"decision[{d}]", "parameter row for a decision not in the model")
        for d in extra
    ]
    if violations:
        raise InvariantError(violations)

    by_id = {row.decision_id: row for row in doc.rows}
    return ConsensusParameters(
        decision_weights={d: by_id[d].weight for d in model_ids},
        supports={d: by_id[d].support for d in model_ids},
        sibling_weights=None,
    )


def model_to_dict(model: LinkingModel) -> dict:
    return {
        "name": model.name,
        "synthetic": model.synthetic,
        "valueStreams": [
            {
                "id": vs.id,
                "name": vs.name,
                "processes": [
                    {
                        "id": proc.id,
                        "name": proc.name,
                        "decisions": [{"id": d.id, "text": d.text} for d in proc.decisions],
                    }
                    for proc in vs.processes
                ],
            }
            for vs in model.value_streams
        ],
        "dataItems": [
            {"id": i.id, "name": i.name, "category": i.category} for i in model.data_items
        ],
        "analyses": [
            {
                "id": a.id,
                "name": a.name,
                "decisionId": a.decision_id,
                "dataItemIds": list(a.data_item_ids),
            }
            for a in model.analyses
        ],
    }


def judgments_to_dict(judgments: ScenarioJudgments) -> dict:
    return {
        "scenario": judgments.scenario_id,
        "anchor": judgments.anchor_description,
        "assessors": [{"id": a.id, "role": a.role} for a in judgments.assessors],
        "swingJudgments": [
            {"assessorId": j.assessor_id, "groupId": j.group_id, "entries": dict(j.entries)}
            for j in judgments.swing_judgments
        ],
        "supportJudgments": [
            {"assessorId": s.assessor_id, "decisionId": s.decision_id, "label": s.label}
            for s in judgments.support_judgments
        ],
    }


def aggregated_to_dict(doc: AggregatedParameters) -> dict:
    return {
        "decisions": [
            {"decisionId": r.decision_id, "weight": r.weight, "support": r.support}
            for r in doc.rows
        ]
    }


def _to_bytes(doc: dict) -> bytes:
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def export_document(doc) -> bytes:
    """Serialise a model, judgments or aggregated document back to JSON."""
    if isinstance(doc, LinkingModel):
        return _to_bytes(model_to_dict(doc))
    if isinstance(doc, ScenarioJudgments):
        return _to_bytes(judgments_to_dict(doc))
    if isinstance(doc, AggregatedParameters):
        return _to_bytes(aggregated_to_dict(doc))
    raise TypeError(f"cannot export {type(doc).__name__}")


def _priority_csv(report: PriorityReport) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rank", "item_id", "name", "category", "index"])
    for entry in report.ranking:
        meta = report.item_meta[entry.item_id]
        writer.writerow(
            [entry.rank, entry.item_id, meta.name, meta.category, f"{entry.score:.6f}"]
        )
    return buf.getvalue().encode("utf-8")


def _sensitivity_csv(report: SensitivityReport) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["item_id", "name", "category", "baseline_rank", "min_rank", "max_rank", "top_k_probability"]
    )
    for item in report.items:
        meta = report.item_meta[item.item_id]
        writer.writerow(
            [
                item.item_id,
                meta.name,
                meta.category,
                item.baseline_rank,
                item.min_rank,
                item.max_rank,
                f"{item.top_k_probability:.6f}",
            ]
        )
    return buf.getvalue().encode("utf-8")


def _meta_to_dict(item_meta: dict[str, ItemMeta]) -> dict:
    return {m.id: {"name": m.name, "category": m.category} for m in item_meta.values()}


def priority_report_to_dict(report: PriorityReport) -> dict:
    return {
        "kind": "priority",
        "scenario": report.scenario_id,
        "totalWeightedSupport": report.total_weighted_support,
        "unsupportedWeight": report.unsupported_weight,
        "itemScores": dict(report.item_scores),
        "ranking": [
            {"rank": e.rank, "itemId": e.item_id, "score": e.score}
            for e in report.ranking
        ],
        "items": _meta_to_dict(report.item_meta),
    }


def sensitivity_report_to_dict(report: SensitivityReport) -> dict:
    return {
        "kind": "sensitivity",
        "scenario": report.scenario_id,
        "epsilon": report.epsilon,
        "trials": report.trials,
        "seed": report.seed,
        "topK": report.top_k,
        "items": [
            {
                "itemId": i.item_id,
                "baselineRank": i.baseline_rank,
                "minRank": i.min_rank,
                "maxRank": i.max_rank,
                "topKProbability": i.top_k_probability,
            }
            for i in report.items
        ],
        "itemMeta": _meta_to_dict(report.item_meta),
    }


def export_report(report: PriorityReport | SensitivityReport, format: str = "json") -> bytes:
    """Render a report. CSV is for spreadsheets; JSON round-trips exactly."""
    if format == "csv":
        if isinstance(report, PriorityReport):
            return _priority_csv(report)
        if isinstance(report, SensitivityReport):
            return _sensitivity_csv(report)
        raise TypeError(f"cannot export {type(report).__name__}")
    if format != "json":
        raise ValueError(f"unknown report format {format!r}")

    if isinstance(report, PriorityReport):
        return _to_bytes(priority_report_to_dict(report))
    if isinstance(report, SensitivityReport):
        return _to_bytes(sensitivity_report_to_dict(report))
    raise TypeError(f"cannot export {type(report).__name__}")


def _meta_from_dict(doc, path: str) -> dict[str, ItemMeta]:
    out = {}
    for item_id, m in _typed(doc, dict, path).items():
        m_path = f"{path}.{item_id}"
        out[item_id] = ItemMeta(
            id=item_id,
            name=_require(m, "name", str, m_path),
            category=_require(m, "category", str, m_path),
        )
    return out


def import_report(data: bytes | str) -> PriorityReport | SensitivityReport:
    """Load a JSON report produced by export_report."""
    doc = _parse_json(data)
    kind = _require(doc, "kind", str, "$")
    if kind == "priority":
        scores = {
            item_id: _typed(v, float, f"$.itemScores.{item_id}")
            for item_id, v in _require(doc, "itemScores", dict, "$").items()
        }
        ranking = tuple(
            RankEntry(
                rank=_require(e, "rank", int, f"$.ranking[{k}]"),
                item_id=_require(e, "itemId", str, f"$.ranking[{k}]"),
                score=_require(e, "score", float, f"$.ranking[{k}]"),
            )
            for k, e in enumerate(_require(doc, "ranking", list, "$"))
        )
        return PriorityReport(
            scenario_id=_require(doc, "scenario", str, "$"),
            item_scores=scores,
            ranking=ranking,
            total_weighted_support=_require(doc, "totalWeightedSupport", float, "$"),
            unsupported_weight=_require(doc, "unsupportedWeight", float, "$"),
            item_meta=_meta_from_dict(_require(doc, "items", dict, "$"), "$.items"),
        )
    if kind == "sensitivity":
        items = tuple(
            ItemSensitivity(
                item_id=_require(i, "itemId", str, f"$.items[{k}]"),
                baseline_rank=_require(i, "baselineRank", int, f"$.items[{k}]"),
                min_rank=_require(i, "minRank", int, f"$.items[{k}]"),
                max_rank=_require(i, "maxRank", int, f"$.items[{k}]"),
                top_k_probability=_require(i, "topKProbability", float, f"$.items[{k}]"),
            )
            for k, i in enumerate(_require(doc, "items", list, "$"))
        )
        return SensitivityReport(
            scenario_id=_require(doc, "scenario", str, "$"),
            epsilon=_require(doc, "epsilon", float, "$"),
            trials=_require(doc, "trials", int, "$"),
            seed=_require(doc, "seed", int, "$"),
            top_k=_require(doc, "topK", int, "$"),
            items=items,
            item_meta=_meta_from_dict(_require(doc, "itemMeta", dict, "$"), "$.itemMeta"),
        )
    raise SchemaError("$.kind", f"unknown report kind {kind!r}")
