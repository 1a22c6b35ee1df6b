"""Command-line entry point.

Exit codes: 0 success, 1 validation or consistency failure, 2 parse, IO or
usage failure. Machine output (CSV/JSON) goes to stdout, or to --out when
given, in which case a one-line summary goes to stderr; stdout never mixes
machine formats with log text.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import service as service_module
from .documents import (
    AggregatedParameters,
    ParameterRow,
    export_document,
    export_report,
    import_document,
    import_report,
    resolve_parameters,
)
from .elicitation import aggregate_scenario, consistency_probe
from .errors import (
    IncompleteScenarioError,
    InvariantError,
    ParseError,
    SchemaError,
)
from .scoring import (
    build_priority_report,
    compare_top_n,
    perturb_sensitivity,
    rollup_weights,
)

PROBE_PASS_TOLERANCE = 1e-9


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _epsilon(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("epsilon must lie strictly between 0 and 1")
    return value


def _port(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not 0 < value < 65536:
        raise argparse.ArgumentTypeError("port must be in 1..65535")
    return value


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _load_model(args):
    return import_document("model", _read(args.model))


def _load_params(args, model):
    """Consensus parameters from either raw judgments or an aggregated table."""
    if getattr(args, "judgments", None):
        judgments = import_document("judgments", _read(args.judgments))
        policy = getattr(args, "support_policy", "strict")
        return aggregate_scenario(model, judgments, policy), judgments.scenario_id
    doc = import_document("aggregated", _read(args.aggregated))
    return resolve_parameters(doc, model), Path(args.aggregated).stem


def _emit(data: bytes, out: str | None, summary: str) -> None:
    if out:
        Path(out).write_bytes(data)
        print(summary, file=sys.stderr)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def cmd_validate(args) -> int:
    _load_model(args)
    checked = ["model"]
    if args.judgments:
        import_document("judgments", _read(args.judgments))
        checked.append("judgments")
    if args.aggregated:
        doc = import_document("aggregated", _read(args.aggregated))
        checked.append("aggregated")
        if args.model:
            resolve_parameters(doc, _load_model(args))
    print(f"ok: {', '.join(checked)} valid")
    return 0


def cmd_weights(args) -> int:
    model = _load_model(args)
    judgments = import_document("judgments", _read(args.judgments))
    params = aggregate_scenario(model, judgments, args.support_policy)
    rows = tuple(
        ParameterRow(dec.id, params.decision_weights[dec.id], params.supports[dec.id])
        for dec in model.decisions
    )
    data = export_document(AggregatedParameters(rows))
    _emit(data, args.out, f"wrote consensus parameters for {len(rows)} decisions to {args.out}")
    return 0


def cmd_score(args) -> int:
    model = _load_model(args)
    params, scenario_id = _load_params(args, model)
    if args.scenario:
        scenario_id = args.scenario
    report = build_priority_report(model, params, scenario_id, top_n=args.top)
    data = export_report(report, args.format)
    _emit(data, args.out, f"wrote {len(report.ranking)} ranked items to {args.out}")
    return 0


def cmd_probe(args) -> int:
    judgments = import_document("judgments", _read(args.judgments))
    for judgment in judgments.swing_judgments:
        if judgment.assessor_id == args.assessor and judgment.group_id == args.group:
            break
    else:
        print(
            f"no judgment by assessor {args.assessor!r} for group {args.group!r}",
            file=sys.stderr,
        )
        return 1
    subset = {part for part in args.subset.split(",") if part}
    result = consistency_probe(judgment, subset, args.target)
    print(f"ratio {result.ratio:.2f}")
    return 0 if abs(result.ratio - 1.0) <= PROBE_PASS_TOLERANCE else 1


def cmd_rollup(args) -> int:
    model = _load_model(args)
    params, _ = _load_params(args, model)
    rollup = rollup_weights(params, model)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["level", "id", "name", "weight"])
        for row in rollup.value_streams:
            writer.writerow(["value_stream", row.id, row.name, f"{row.weight:.6f}"])
        for row in rollup.processes:
            writer.writerow(["process", row.id, row.name, f"{row.weight:.6f}"])
        data = buf.getvalue().encode("utf-8")
    else:
        doc = {
            "valueStreams": [
                {"id": r.id, "name": r.name, "weight": r.weight} for r in rollup.value_streams
            ],
            "processes": [
                {"id": r.id, "name": r.name, "weight": r.weight} for r in rollup.processes
            ],
            "total": rollup.total,
        }
        data = (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    _emit(data, args.out, f"wrote roll-up for {len(rollup.processes)} processes to {args.out}")
    return 0


def cmd_compare(args) -> int:
    report_a = import_report(_read(args.a))
    report_b = import_report(_read(args.b))
    result = compare_top_n(report_a.ranking, report_b.ranking, args.n)
    doc = {
        "n": result.n,
        "overlapCount": result.overlap_count,
        "commonIds": list(result.common_ids),
        "onlyA": list(result.only_a),
        "onlyB": list(result.only_b),
    }
    data = (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    _emit(data, args.out, f"top-{result.n} overlap {result.overlap_count} written to {args.out}")
    return 0


def cmd_sensitivity(args) -> int:
    model = _load_model(args)
    judgments = import_document("judgments", _read(args.judgments))
    report = perturb_sensitivity(
        model,
        judgments,
        epsilon=args.epsilon,
        trials=args.trials,
        seed=args.seed,
        top_k=args.top_k,
        support_policy=args.support_policy,
    )
    data = export_report(report, args.format)
    _emit(data, args.out, f"wrote sensitivity over {args.trials} trials to {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    state = service_module.ServiceState()
    if args.model:
        model = _load_model(args)
        model_id = state.register_model(model)
        print(f"preloaded model {model_id} from {args.model}", file=sys.stderr)
    app = service_module.create_app(state, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dataprio",
        description="Prioritise candidate data items for business analytics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check documents against schema and invariants")
    p.add_argument("--model", required=True)
    p.add_argument("--judgments")
    p.add_argument("--aggregated")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("weights", help="aggregate judgments into consensus parameters")
    p.add_argument("--model", required=True)
    p.add_argument("--judgments", required=True)
    p.add_argument("--support-policy", choices=["strict", "exclude_zeros"], default="strict")
    p.add_argument("--out")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("score", help="rank data items by priority index")
    p.add_argument("--model", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--judgments")
    src.add_argument("--aggregated")
    p.add_argument("--support-policy", choices=["strict", "exclude_zeros"], default="strict")
    p.add_argument("--top", type=_positive_int)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--scenario", help="override the scenario id used in the report")
    p.add_argument("--out")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("probe", help="additive consistency probe on one judgment")
    p.add_argument("--judgments", required=True)
    p.add_argument("--assessor", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--subset", required=True, help="comma-separated member ids")
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("rollup", help="sum decision weights per process and value stream")
    p.add_argument("--model", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--judgments")
    src.add_argument("--aggregated")
    p.add_argument("--support-policy", choices=["strict", "exclude_zeros"], default="strict")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rollup)

    p = sub.add_parser("compare", help="overlap of two priority reports' top N")
    p.add_argument("--a", required=True, help="first JSON priority report")
    p.add_argument("--b", required=True, help="second JSON priority report")
    p.add_argument("--n", required=True, type=_positive_int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sensitivity", help="rank stability under judgment noise")
    p.add_argument("--model", required=True)
    p.add_argument("--judgments", required=True)
    p.add_argument("--epsilon", required=True, type=_epsilon)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_nonnegative_int, default=0)
    p.add_argument("--top-k", type=_positive_int, default=10)
    p.add_argument("--support-policy", choices=["strict", "exclude_zeros"], default="strict")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("serve", help="run the workshop HTTP service")
    p.add_argument("--port", type=_port, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--model", help="preload a model file at startup")
    p.add_argument("--ui", help="directory with a built workshop UI to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        for violation in exc.violations:
            print(f"violation: {violation.location}: {violation.message}", file=sys.stderr)
        return 1
    except IncompleteScenarioError as exc:
        print(f"incomplete scenario: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
