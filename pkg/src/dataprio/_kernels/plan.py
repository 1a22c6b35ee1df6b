"""Flattened scenario layout shared by both trial-score backends.

A TrialPlan freezes one scenario's judgments into contiguous arrays so a
single perturbation trial is a handful of tight loops. Both backends walk
the arrays in exactly the same order and apply operations in exactly the
same sequence as the high-level aggregation pipeline, so a trial run with
all perturbation factors equal to 1.0 reproduces the pipeline's numbers
bit for bit.

Array layout:
  - swing entries are judgment-major; judgments are group-major with groups
    in model order ("vs", then each value stream's process group, then each
    process's decision group) and an assessor's judgments in scenario order
  - every group member owns one global "slot"; entry_slot maps each raw
    entry to its slot
  - support values are decision-major in model decision order, scenario
    order within a decision
  - decision-to-item links are CSR in model decision/item order
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..elicitation import (
    SUPPORT_VALUES,
    ScenarioJudgments,
    aggregate_scenario,
    build_groups,
)
from ..model import LinkingModel, derive_incidence

__all__ = ["TrialPlan", "build_trial_plan"]


@dataclass
class TrialPlan:
    scenario_id: str
    support_policy: str
    item_ids: tuple[str, ...]
    decision_ids: tuple[str, ...]

    entry_raw: np.ndarray  # float64[E] provisional percentages
    entry_slot: np.ndarray  # intp[E] global slot per entry
    jud_ptr: np.ndarray  # intp[J+1] entry ranges per judgment
    group_jud_ptr: np.ndarray  # intp[G+1] judgment ranges per group
    group_slot_ptr: np.ndarray  # intp[G+1] slot ranges per group
    dec_vs_slot: np.ndarray  # intp[D] slot of the decision's value stream
    dec_proc_slot: np.ndarray  # intp[D] slot of the decision's process
    dec_dec_slot: np.ndarray  # intp[D] slot of the decision itself
    sup_raw: np.ndarray  # float64[S] support values
    sup_ptr: np.ndarray  # intp[D+1] support ranges per decision
    inc_item: np.ndarray  # intp[K] linked item indices (CSR)
    inc_ptr: np.ndarray  # intp[D+1] link ranges per decision

    _np_ws: dict = field(default_factory=dict, repr=False)
    _list_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_entries(self) -> int:
        return len(self.entry_raw)

    @property
    def n_supports(self) -> int:
        return len(self.sup_raw)

    @property
    def n_slots(self) -> int:
        return int(self.group_slot_ptr[-1])

    @property
    def n_decisions(self) -> int:
        return len(self.decision_ids)

    @property
    def n_items(self) -> int:
        return len(self.item_ids)

    def numpy_workspaces(self) -> dict:
        """Reusable scratch buffers for the native backend (not thread-safe)."""
        if not self._np_ws:
            self._np_ws = {
                "work_entries": np.empty(self.n_entries, dtype=np.float64),
                "slot_vals": np.empty(self.n_slots, dtype=np.float64),
                "wvec": np.empty(self.n_decisions, dtype=np.float64),
                "dvec": np.empty(self.n_decisions, dtype=np.float64),
            }
        return self._np_ws

    def as_lists(self) -> dict:
        """Plan arrays as plain Python lists for the pure-Python backend."""
        if not self._list_cache:
            self._list_cache = {
                "entry_raw": self.entry_raw.tolist(),
                "entry_slot": self.entry_slot.tolist(),
                "jud_ptr": self.jud_ptr.tolist(),
                "group_jud_ptr": self.group_jud_ptr.tolist(),
                "group_slot_ptr": self.group_slot_ptr.tolist(),
                "dec_vs_slot": self.dec_vs_slot.tolist(),
                "dec_proc_slot": self.dec_proc_slot.tolist(),
                "dec_dec_slot": self.dec_dec_slot.tolist(),
                "sup_raw": self.sup_raw.tolist(),
                "sup_ptr": self.sup_ptr.tolist(),
                "inc_item": self.inc_item.tolist(),
                "inc_ptr": self.inc_ptr.tolist(),
            }
        return self._list_cache


def _ptr(counts: list[int]) -> np.ndarray:
    out = np.zeros(len(counts) + 1, dtype=np.intp)
    np.cumsum(counts, out=out[1:])
    return out


def build_trial_plan(
    model: LinkingModel,
    judgments: ScenarioJudgments,
    support_policy: str = "strict",
) -> TrialPlan:
    """Flatten a complete, valid scenario into a TrialPlan.

    Validation is delegated to aggregate_scenario so an invalid or
    incomplete scenario fails here with the same errors it would raise in
    the plain pipeline.
    """
    aggregate_scenario(model, judgments, support_policy)

    groups = build_groups(model)
    slot_of: dict[str, dict[str, int]] = {}
    group_sizes = []
    base = 0
    slot_base: dict[str, int] = {}
    for group in groups:
        slot_base[group.group_id] = base
        slot_of[group.group_id] = {m: base + i for i, m in enumerate(group.member_ids)}
        group_sizes.append(len(group.member_ids))
        base += len(group.member_ids)

    entry_raw: list[float] = []
    entry_slot: list[int] = []
    jud_counts: list[int] = []
    group_jud_counts: list[int] = []
    for group in groups:
        in_group = [j for j in judgments.swing_judgments if j.group_id == group.group_id]
        group_jud_counts.append(len(in_group))
        for judgment in in_group:
            jud_counts.append(len(judgment.entries))
            for member, value in judgment.entries.items():
                entry_raw.append(float(value))
                entry_slot.append(slot_of[group.group_id][member])

    decisions = []
    dec_vs_slot: list[int] = []
    dec_proc_slot: list[int] = []
    dec_dec_slot: list[int] = []
    for vs, proc, dec in model.iter_decisions():
        decisions.append(dec.id)
        dec_vs_slot.append(slot_of["vs"][vs.id])
        dec_proc_slot.append(slot_of[f"vs:{vs.id}"][proc.id])
        dec_dec_slot.append(slot_of[f"proc:{proc.id}"][dec.id])

    sup_raw: list[float] = []
    sup_counts: list[int] = []
    for dec_id in decisions:
        values = [
            SUPPORT_VALUES[s.label]
            for s in judgments.support_judgments
            if s.decision_id == dec_id
        ]
        sup_counts.append(len(values))
        sup_raw.extend(values)

    incidence = derive_incidence(model)
    item_index = {item_id: k for k, item_id in enumerate(incidence.item_ids)}
    inc_item: list[int] = []
    inc_counts: list[int] = []
    for dec_id in decisions:
        linked = incidence.links[dec_id]
        inc_counts.append(len(linked))
        inc_item.extend(item_index[item_id] for item_id in linked)

    return TrialPlan(
        scenario_id=judgments.scenario_id,
        support_policy=support_policy,
        item_ids=incidence.item_ids,
        decision_ids=tuple(decisions),
        entry_raw=np.asarray(entry_raw, dtype=np.float64),
        entry_slot=np.asarray(entry_slot, dtype=np.intp),
        jud_ptr=_ptr(jud_counts),
        group_jud_ptr=_ptr(group_jud_counts),
        group_slot_ptr=_ptr(group_sizes),
        dec_vs_slot=np.asarray(dec_vs_slot, dtype=np.intp),
        dec_proc_slot=np.asarray(dec_proc_slot, dtype=np.intp),
        dec_dec_slot=np.asarray(dec_dec_slot, dtype=np.intp),
        sup_raw=np.asarray(sup_raw, dtype=np.float64),
        sup_ptr=_ptr(sup_counts),
        inc_item=np.asarray(inc_item, dtype=np.intp),
        inc_ptr=_ptr(inc_counts),
    )
