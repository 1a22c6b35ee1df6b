"""Workshop HTTP service.

Holds models and elicitation scenarios in memory for one facilitation
session. Writes to a scenario are serialized behind a per-scenario lock
and produce a fresh immutable snapshot with a bumped revision; reads grab
whatever snapshot is current and compute pure functions over it, so every
response is consistent with exactly one revision (which it reports).

No authentication: meant for a facilitator's laptop on a workshop LAN.
"""

from __future__ import annotations

import itertools
import json
import math
import threading
from dataclasses import dataclass, replace

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .documents import (
    import_document,
    judgments_to_dict,
    model_to_dict,
    priority_report_to_dict,
    sensitivity_report_to_dict,
)
from .elicitation import (
    SUPPORT_VALUES,
    Assessor,
    ScenarioJudgments,
    SupportJudgment,
    SwingGroup,
    SwingJudgment,
    aggregate_group,
    aggregate_scenario,
    build_groups,
    compose_weights,
    consistency_probe,
    normalize_swings,
    validate_swings,
)
from .errors import IncompleteScenarioError, InvariantError, ParseError, SchemaError
from .model import LinkingModel, Violation
from .scoring import build_priority_report, perturb_sensitivity

MAX_SENSITIVITY_TRIALS = 100_000


@dataclass(frozen=True)
class ScenarioSnapshot:
    """One immutable state of a scenario's judgments."""

    scenario_id: str
    model_id: str
    anchor: str
    revision: int
    assessors: dict[str, str]  # assessor id -> role; treat as immutable
    swings: dict[tuple[str, str], dict[str, float]]  # (assessor, group) -> entries
    supports: dict[str, dict[str, str]]  # assessor -> decision -> label

    def with_assessor(self, assessor_id: str, role: str) -> "ScenarioSnapshot":
        assessors = dict(self.assessors)
        if role or assessor_id not in assessors:
            assessors[assessor_id] = role or assessors.get(assessor_id, "")
        return replace(self, assessors=assessors)

    def with_swing(self, assessor_id: str, group_id: str, entries: dict[str, float]):
        swings = dict(self.swings)
        swings[(assessor_id, group_id)] = dict(entries)
        return replace(self, swings=swings, revision=self.revision + 1)

    def with_supports(self, assessor_id: str, labels: dict[str, str]):
        supports = dict(self.supports)
        supports[assessor_id] = dict(labels)
        return replace(self, supports=supports, revision=self.revision + 1)

    def to_judgments(self) -> ScenarioJudgments:
        """Canonical (sorted) judgment document for this snapshot.

        The ordering is fixed so that identical state always yields an
        identical document, and so that scoring this export offline matches
        the service's own results bit for bit.
        """
        return ScenarioJudgments(
            scenario_id=self.scenario_id,
            anchor_description=self.anchor,
            assessors=tuple(
                Assessor(aid, self.assessors[aid]) for aid in sorted(self.assessors)
            ),
            swing_judgments=tuple(
                SwingJudgment(aid, gid, dict(self.swings[(aid, gid)]))
                for aid, gid in sorted(self.swings)
            ),
            support_judgments=tuple(
                SupportJudgment(aid, did, self.supports[aid][did])
                for aid in sorted(self.supports)
                for did in sorted(self.supports[aid])
            ),
        )


class ScenarioSession:
    def __init__(self, snapshot: ScenarioSnapshot):
        self.lock = threading.Lock()
        self.snapshot = snapshot


class ServiceState:
    def __init__(self):
        self._lock = threading.Lock()
        self._model_ids = itertools.count(1)
        self._scenario_ids = itertools.count(1)
        self.models: dict[str, LinkingModel] = {}
        self.scenarios: dict[str, ScenarioSession] = {}

    def register_model(self, model: LinkingModel) -> str:
        with self._lock:
            model_id = f"m{next(self._model_ids)}"
            self.models[model_id] = model
        return model_id

    def create_scenario(self, model_id: str, scenario_id: str | None, anchor: str) -> ScenarioSession:
        with self._lock:
            sid = scenario_id or f"s{next(self._scenario_ids)}"
            session = ScenarioSession(
                ScenarioSnapshot(
                    scenario_id=sid,
                    model_id=model_id,
                    anchor=anchor,
                    revision=0,
                    assessors={},
                    swings={},
                    supports={},
                )
            )
            self.scenarios[sid] = session
        return session


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, **extra})


def _violations_response(violations) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content={
            "error": "invariant violation",
            "violations": [
                {"code": v.code, "location": v.location, "message": v.message}
                for v in violations
            ],
        },
    )


def _group_catalog(model: LinkingModel) -> list[dict]:
    """Groups with display names, in elicitation order."""
    names: dict[str, dict[str, str]] = {"vs": {vs.id: vs.name for vs in model.value_streams}}
    for vs in model.value_streams:
        names[f"vs:{vs.id}"] = {p.id: p.name for p in vs.processes}
    for _, proc in model.iter_processes():
        names[f"proc:{proc.id}"] = {d.id: d.text for d in proc.decisions}
    return [
        {
            "groupId": g.group_id,
            "members": [{"id": m, "name": names[g.group_id][m]} for m in g.member_ids],
        }
        for g in build_groups(model)
    ]


async def _json_body(request: Request):
    raw = await request.body()
    try:
        return json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(str(exc)) from exc


def create_app(state: ServiceState | None = None, ui_dir: str | None = None) -> FastAPI:
    state = state if state is not None else ServiceState()
    app = FastAPI(title="dataprio workshop service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.dataprio = state

    @app.exception_handler(ParseError)
    async def _parse_error(request, exc):
        return _error(400, f"malformed request body: {exc}")

    @app.exception_handler(SchemaError)
    async def _schema_error(request, exc):
        return _error(400, f"bad request shape: {exc}")

    @app.exception_handler(InvariantError)
    async def _invariant_error(request, exc):
        return _violations_response(exc.violations)

    @app.exception_handler(RequestValidationError)
    async def _request_validation(request, exc):
        return _error(400, "invalid request parameters")

    def _scenario_or_none(sid: str) -> ScenarioSession | None:
        return state.scenarios.get(sid)

    def _model_for(snapshot: ScenarioSnapshot) -> LinkingModel:
        return state.models[snapshot.model_id]

    @app.post("/api/models")
    async def post_model(request: Request):
        raw = await request.body()
        model = import_document("model", raw)  # errors map via handlers above
        model_id = state.register_model(model)
        return {"modelId": model_id, "name": model.name}

    @app.get("/api/models/{model_id}")
    async def get_model(model_id: str):
        model = state.models.get(model_id)
        if model is None:
            return _error(404, f"unknown model {model_id!r}")
        return {"modelId": model_id, "model": model_to_dict(model)}

    @app.get("/api/models/{model_id}/groups")
    async def get_groups(model_id: str):
        model = state.models.get(model_id)
        if model is None:
            return _error(404, f"unknown model {model_id!r}")
        return {"modelId": model_id, "groups": _group_catalog(model)}

    @app.post("/api/models/{model_id}/scenarios")
    async def post_scenario(model_id: str, request: Request):
        model = state.models.get(model_id)
        if model is None:
            return _error(404, f"unknown model {model_id!r}")
        body = {}
        raw = await request.body()
        if raw:
            body = await _json_body(request)
            if not isinstance(body, dict):
                return _error(400, "scenario options must be a JSON object")
        scenario_id = body.get("scenario")
        anchor = body.get("anchor", "average performance to top 10%")
        if scenario_id is not None and not isinstance(scenario_id, str):
            return _error(400, "scenario must be a string")
        if not isinstance(anchor, str):
            return _error(400, "anchor must be a string")
        if scenario_id and scenario_id in state.scenarios:
            return _error(409, f"scenario {scenario_id!r} already exists")
        session = state.create_scenario(model_id, scenario_id, anchor)
        snap = session.snapshot
        return {"scenarioId": snap.scenario_id, "modelId": model_id, "revision": snap.revision}

    @app.put("/api/scenarios/{sid}/assessors/{aid}/swings/{group_id}")
    async def put_swings(sid: str, aid: str, group_id: str, request: Request):
        session = _scenario_or_none(sid)
        if session is None:
            return _error(404, f"unknown scenario {sid!r}")
        model = _model_for(session.snapshot)
        groups = {g.group_id: g for g in build_groups(model)}
        group = groups.get(group_id)
        if group is None:
            return _error(404, f"unknown group {group_id!r}")

        body = await _json_body(request)
        if not isinstance(body, dict) or not isinstance(body.get("entries"), dict):
            return _error(400, 'body must be {"entries": {memberId: percent}}')
        entries: dict[str, float] = {}
        for member, value in body["entries"].items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                return _error(400, f"entry {member!r} must be a number")
            entries[member] = float(value)
        role = body.get("role", "")
        if not isinstance(role, str):
            return _error(400, "role must be a string")

        judgment = SwingJudgment(assessor_id=aid, group_id=group_id, entries=entries)
        report = validate_swings(judgment, group)
        if not report.ok:
            return _violations_response(report.violations)

        with session.lock:
            snap = session.snapshot.with_assessor(aid, role).with_swing(aid, group_id, entries)
            session.snapshot = snap
        return {
            "revision": snap.revision,
            "groupId": group_id,
            "normalized": normalize_swings(judgment),
        }

    @app.put("/api/scenarios/{sid}/assessors/{aid}/support")
    async def put_support(sid: str, aid: str, request: Request):
        session = _scenario_or_none(sid)
        if session is None:
            return _error(404, f"unknown scenario {sid!r}")
        model = _model_for(session.snapshot)
        known = {dec.id for dec in model.decisions}

        body = await _json_body(request)
        if not isinstance(body, dict) or not isinstance(body.get("supports"), dict):
            return _error(400, 'body must be {"supports": {decisionId: label}}')
        labels = body["supports"]
        role = body.get("role", "")
        if not isinstance(role, str):
            return _error(400, "role must be a string")

        violations = []
        for decision_id, label in labels.items():
            loc = f"support[{aid}/{decision_id}]"
            if decision_id not in known:
                violations.append(
                    Violation("unknown-decision", loc, f"decision {decision_id!r} not in model")
                )
            if not isinstance(label, str) or label not in SUPPORT_VALUES:
                violations.append(
                    Violation("unknown-label", loc, f"unknown support label {label!r}")
                )
        if violations:
            return _violations_response(violations)

        with session.lock:
            snap = session.snapshot.with_assessor(aid, role).with_supports(aid, labels)
            session.snapshot = snap
        return {"revision": snap.revision, "count": len(labels)}

    @app.get("/api/scenarios/{sid}/judgments")
    async def get_judgments(sid: str):
        session = _scenario_or_none(sid)
        if session is None:
            return _error(404, f"unknown scenario {sid!r}")
        snap = session.snapshot
        return {"revision": snap.revision, "judgments": judgments_to_dict(snap.to_judgments())}

    @app.get("/api/scenarios/{sid}/weights")
    async def get_weights(sid: str):
        session = _scenario_or_none(sid)
        if session is None:
            return _error(404, f"unknown scenario {sid!r}")
        snap = session.snapshot
        model = _model_for(snap)
        groups = build_groups(model)

        per_group: dict[str, list[dict[str, float]]] = {g.group_id: [] for g in groups}
        for aid, gid in sorted(snap.swings):
            judgment = SwingJudgment(aid, gid, snap.swings[(aid, gid)])
            group = next(g for g in groups if g.group_id == gid)
            normalized = normalize_swings(judgment)
            per_group[gid].append({m: normalized[m] for m in group.member_ids})

        sibling: dict[str, dict[str, float]] = {}
        missing: list[str] = []
        for g in groups:
            if per_group[g.group_id]:
                sibling[g.group_id] = aggregate_group(per_group[g.group_id])
            else:
                missing.append(g.group_id)

        decision_weights = None
        if not missing:
            decision_weights = compose_weights(sibling, model)
        return {
            "revision": snap.revision,
            "groups": sibling,
            "missingGroups": missing,
            "decisionWeights": decision_weights,
        }

    @app.get("/api/scenarios/{sid}/ranking")
    async def get_ranking(sid: str, top: int | None = None):
        session = _scenario_or_none(sid)
        if session is None:
            return _error(404, f"unknown scenario {sid!r}")
        if top is not None and top < 1:
            return _error(400, "top must be >= 1")
        snap = session.snapshot
        model = _model_for(snap)
        try:
            params = aggregate_scenario(model, snap.to_judgments())
        except IncompleteScenarioError as exc:
            return JSONResponse(
                status_code=409,
                content={
                    "error": "incomplete scenario",
                    "revision": snap.revision,
                    "missingGroups": list(exc.missing_groups),
                    "missingSupports": list(exc.missing_supports),
                },
            )
        report = build_priority_report(model, params, snap.scenario_id, top_n=top)
        return {"revision": snap.revision, "report": priority_report_to_dict(report)}

    @app.get("/api/scenarios/{sid}/consistency")
    async def get_consistency(sid: str, assessor: str, group: str, subset: str, target: str):
        session = _scenario_or_none(sid)
        if session is None:
            return _error(404, f"unknown scenario {sid!r}")
        snap = session.snapshot
        entries = snap.swings.get((assessor, group))
        if entries is None:
            return _error(404, f"no judgment by {assessor!r} for group {group!r}")
        subset_ids = {part for part in subset.split(",") if part}
        judgment = SwingJudgment(assessor, group, entries)
        try:
            result = consistency_probe(judgment, subset_ids, target)
        except ValueError as exc:
            return _error(400, str(exc))
        return {
            "revision": snap.revision,
            "subsetSum": result.subset_sum,
            "targetValue": result.target_value,
            "ratio": result.ratio,
            "consistent": result.consistent,
        }

    @app.get("/api/scenarios/{sid}/sensitivity")
    async def get_sensitivity(
        sid: str,
        epsilon: float = 0.1,
        trials: int = 200,
        seed: int = 0,
        topK: int = 10,
    ):
        session = _scenario_or_none(sid)
        if session is None:
            return _error(404, f"unknown scenario {sid!r}")
        if not (math.isfinite(epsilon) and 0.0 < epsilon < 1.0):
            return _error(400, "epsilon must lie strictly between 0 and 1")
        if not 1 <= trials <= MAX_SENSITIVITY_TRIALS:
            return _error(400, f"trials must be in 1..{MAX_SENSITIVITY_TRIALS}")
        if seed < 0:
            return _error(400, "seed must be >= 0")
        if topK < 1:
            return _error(400, "topK must be >= 1")
        snap = session.snapshot
        model = _model_for(snap)
        try:
            report = perturb_sensitivity(
                model, snap.to_judgments(), epsilon=epsilon, trials=trials, seed=seed, top_k=topK
            )
        except IncompleteScenarioError as exc:
            return JSONResponse(
                status_code=409,
                content={
                    "error": "incomplete scenario",
                    "revision": snap.revision,
                    "missingGroups": list(exc.missing_groups),
                    "missingSupports": list(exc.missing_supports),
                },
            )
        return {"revision": snap.revision, "report": sensitivity_report_to_dict(report)}

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
