"""Trial-kernel backend selection.

The compiled extension is optional. When it imports, it is the default;
otherwise the pure-Python reference takes over with identical numerical
behaviour. Set DATAPRIO_KERNEL=pure or =native to force a backend
(checked once, at import).
"""

from __future__ import annotations

import os

import numpy as np

from . import _reference
from .plan import TrialPlan, build_trial_plan

try:
    from . import _native
except ImportError:
    _native = None

__all__ = ["TrialPlan", "build_trial_plan", "trial_scores", "backend_name", "has_native"]


def _select() -> str:
    forced = os.environ.get("DATAPRIO_KERNEL", "auto").lower()
    if forced == "pure":
        return "pure"
    if forced == "native":
        if _native is None:
            raise RuntimeError(
                "DATAPRIO_KERNEL=native, but the compiled kernel is not available"
            )
        return "native"
    if forced != "auto":
        raise RuntimeError(f"DATAPRIO_KERNEL must be auto, native or pure, not {forced!r}")
    return "native" if _native is not None else "pure"


_BACKEND = _select()


def backend_name() -> str:
    return _BACKEND


def has_native() -> bool:
    return _native is not None


def trial_scores(
    plan: TrialPlan,
    swing_factors: np.ndarray,
    support_factors: np.ndarray,
    backend: str | None = None,
) -> np.ndarray:
    """Item scores for one trial. factors of exactly 1.0 give the baseline.

    ``backend`` overrides the import-time choice (used by the parity tests
    and the benchmark); plan workspaces make this non-reentrant per plan.
    """
    chosen = backend or _BACKEND
    if chosen not in ("pure", "native"):
        raise ValueError(f"unknown backend {chosen!r} (expected 'pure' or 'native')")
    if chosen == "pure":
        return _reference.trial_scores(plan, swing_factors, support_factors)
    if _native is None:
        raise RuntimeError("native kernel is not available")
    ws = plan.numpy_workspaces()
    scores = np.empty(plan.n_items, dtype=np.float64)
    _native.trial_scores_into(
        plan.entry_raw,
        plan.entry_slot,
        plan.jud_ptr,
        plan.group_jud_ptr,
        plan.group_slot_ptr,
        plan.dec_vs_slot,
        plan.dec_proc_slot,
        plan.dec_dec_slot,
        plan.sup_raw,
        plan.sup_ptr,
        plan.inc_item,
        plan.inc_ptr,
        plan.support_policy == "strict",
        np.ascontiguousarray(swing_factors, dtype=np.float64),
        np.ascontiguousarray(support_factors, dtype=np.float64),
        ws["work_entries"],
        ws["slot_vals"],
        ws["wvec"],
        ws["dvec"],
        scores,
    )
    return scores
