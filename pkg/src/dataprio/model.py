"""Four-layer linking model: value streams, processes, decisions, analyses, data items.

The hierarchy is a strict tree (each process belongs to one value stream,
each decision to one process). Analyses attach data items to decisions;
scoring only ever sees the derived decision-to-item incidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import InvariantError

__all__ = [
    "Decision",
    "Process",
    "ValueStream",
    "Analysis",
    "DataItem",
    "LinkingModel",
    "Violation",
    "ValidationReport",
    "IncidenceMap",
    "CoverageStats",
    "validate_model",
    "derive_incidence",
    "coverage_report",
]


@dataclass(frozen=True)
class Decision:
    """A recurring business decision, the unit that carries a weight."""

    id: str
    text: str


@dataclass(frozen=True)
class Process:
    id: str
    name: str
    decisions: tuple[Decision, ...]


@dataclass(frozen=True)
class ValueStream:
    id: str
    name: str
    processes: tuple[Process, ...]


@dataclass(frozen=True)
class Analysis:
    """An analytical product that informs one decision using several data items."""

    id: str
    name: str
    decision_id: str
    data_item_ids: tuple[str, ...]


@dataclass(frozen=True)
class DataItem:
    id: str
    name: str
    category: str


@dataclass(frozen=True)
class LinkingModel:
    """The full linking model.

    ``synthetic`` marks models whose analysis/item layer is illustrative
    rather than elicited from a real organisation.
    """

    name: str
    value_streams: tuple[ValueStream, ...]
    analyses: tuple[Analysis, ...]
    data_items: tuple[DataItem, ...]
    synthetic: bool = False

    def iter_processes(self) -> Iterator[tuple[ValueStream, Process]]:
        for vs in self.value_streams:
            for proc in vs.processes:
                yield vs, proc

    def iter_decisions(self) -> Iterator[tuple[ValueStream, Process, Decision]]:
        for vs in self.value_streams:
            for proc in vs.processes:
                for dec in proc.decisions:
                    yield vs, proc, dec

    @property
    def decisions(self) -> tuple[Decision, ...]:
        return tuple(dec for _, _, dec in self.iter_decisions())


@dataclass(frozen=True)
class Violation:
    code: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_if_failed(self) -> None:
        if self.violations:
            raise InvariantError(self.violations)


@dataclass(frozen=True)
class IncidenceMap:
    """Derived decision-to-item links.

    ``links[j]`` holds the distinct item ids linked to decision ``j`` via at
    least one analysis, in model item order. ``fanout[j]`` is their count.
    """

    decision_ids: tuple[str, ...]
    item_ids: tuple[str, ...]
    links: dict[str, tuple[str, ...]] = field(repr=False)
    fanout: dict[str, int] = field(repr=False)

    def phi(self, decision_id: str, item_id: str) -> int:
        return 1 if item_id in self._link_sets[decision_id] else 0

    @property
    def _link_sets(self) -> dict[str, frozenset[str]]:
        cached = self.__dict__.get("_link_sets_cache")
        if cached is None:
            cached = {j: frozenset(items) for j, items in self.links.items()}
            # frozen dataclass: go through __dict__ for the lazy cache
            self.__dict__["_link_sets_cache"] = cached
        return cached


@dataclass(frozen=True)
class CoverageStats:
    """Counts per process and per item category."""

    decisions_per_process: dict[str, int]
    analyses_per_process: dict[str, int]
    items_per_category: dict[str, int]
    total_decisions: int
    total_analyses: int
    total_items: int


def _check_unique(seen: dict[str, str], kind: str, ident: str, location: str, out: list[Violation]) -> None:
    if not ident:
        out.append(Violation("empty-identifier", location, f"empty {kind} identifier"))
        return
    if ident in seen:
        out.append(
            Violation(
                "duplicate-identifier",
                location,
                f"duplicate {kind} identifier {ident!r} (first seen at {seen[ident]})",
            )
        )
    else:
        seen[ident] = location


def validate_model(doc: LinkingModel) -> ValidationReport:
    """Check every structural rule, collecting all violations in one pass."""
    out: list[Violation] = []
    vs_seen: dict[str, str] = {}
    proc_seen: dict[str, str] = {}
    dec_seen: dict[str, str] = {}
    item_seen: dict[str, str] = {}
    analysis_seen: dict[str, str] = {}

    if not doc.value_streams:
        out.append(Violation("empty-model", "model", "model has no value streams"))

    for vs in doc.value_streams:
        vs_loc = f"value_stream[{vs.id}]"
        _check_unique(vs_seen, "value stream", vs.id, vs_loc, out)
        if not vs.processes:
            out.append(Violation("empty-children", vs_loc, "value stream has no processes"))
        for proc in vs.processes:
            proc_loc = f"{vs_loc}/process[{proc.id}]"
            _check_unique(proc_seen, "process", proc.id, proc_loc, out)
            if not proc.decisions:
                out.append(Violation("empty-children", proc_loc, "process has no decisions"))
            for dec in proc.decisions:
                dec_loc = f"{proc_loc}/decision[{dec.id}]"
                _check_unique(dec_seen, "decision", dec.id, dec_loc, out)

    for item in doc.data_items:
        item_loc = f"data_item[{item.id}]"
        _check_unique(item_seen, "data item", item.id, item_loc, out)
        if not item.category:
            out.append(Violation("empty-category", item_loc, "data item has no category"))

    for analysis in doc.analyses:
        a_loc = f"analysis[{analysis.id}]"
        _check_unique(analysis_seen, "analysis", analysis.id, a_loc, out)
        if analysis.decision_id not in dec_seen:
            out.append(
                Violation(
                    "dangling-decision",
                    a_loc,
                    f"dangling decision reference {analysis.decision_id!r}",
                )
            )
        if not analysis.data_item_ids:
            out.append(Violation("no-items", a_loc, "analysis lists no data items"))
        for item_id in analysis.data_item_ids:
            if item_id not in item_seen:
                out.append(
                    Violation(
                        "dangling-item",
                        a_loc,
                        f"dangling data item reference {item_id!r}",
                    )
                )

    return ValidationReport(tuple(out))


def derive_incidence(model: LinkingModel) -> IncidenceMap:
    """Collapse analyses into 0/1 decision-to-item links.

    An item linked through several analyses of the same decision counts
    once. Decisions with no analyses get an empty link set.
    """
    validate_model(model).raise_if_failed()

    item_order = {item.id: k for k, item in enumerate(model.data_items)}
    linked: dict[str, set[str]] = {dec.id: set() for dec in model.decisions}
    for analysis in model.analyses:
        linked[analysis.decision_id].update(analysis.data_item_ids)

    links = {
        j: tuple(sorted(items, key=item_order.__getitem__)) for j, items in linked.items()
    }
    fanout = {j: len(items) for j, items in links.items()}
    return IncidenceMap(
        decision_ids=tuple(linked),
        item_ids=tuple(item_order),
        links=links,
        fanout=fanout,
    )


def coverage_report(model: LinkingModel) -> CoverageStats:
    """Tally decisions and analyses per process and items per category."""
    validate_model(model).raise_if_failed()

    dec_to_proc = {}
    decisions_per_process = {}
    for _, proc in model.iter_processes():
        decisions_per_process[proc.id] = len(proc.decisions)
        for dec in proc.decisions:
            dec_to_proc[dec.id] = proc.id

    analyses_per_process = {proc.id: 0 for _, proc in model.iter_processes()}
    for analysis in model.analyses:
        analyses_per_process[dec_to_proc[analysis.decision_id]] += 1

    items_per_category: dict[str, int] = {}
    for item in model.data_items:
        items_per_category[item.category] = items_per_category.get(item.category, 0) + 1

    return CoverageStats(
        decisions_per_process=decisions_per_process,
        analyses_per_process=analyses_per_process,
        items_per_category=items_per_category,
        total_decisions=sum(decisions_per_process.values()),
        total_analyses=len(model.analyses),
        total_items=len(model.data_items),
    )
