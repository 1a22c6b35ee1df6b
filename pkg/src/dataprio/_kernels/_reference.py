"""Pure-Python trial kernel.

Mirrors _native.pyx operation for operation. Any change here must be made
there as well; the two backends are required to produce bit-identical
scores (tests enforce it), which only holds while both apply the same
floating-point operations in the same order.
"""

from __future__ import annotations

import numpy as np

from .plan import TrialPlan

__all__ = ["trial_scores"]


def trial_scores(
    plan: TrialPlan, swing_factors: np.ndarray, support_factors: np.ndarray
) -> np.ndarray:
    """Scores for one perturbation trial (factors of 1.0 = the baseline)."""
    a = plan.as_lists()
    entry_raw = a["entry_raw"]
    entry_slot = a["entry_slot"]
    jud_ptr = a["jud_ptr"]
    group_jud_ptr = a["group_jud_ptr"]
    group_slot_ptr = a["group_slot_ptr"]
    dec_vs_slot = a["dec_vs_slot"]
    dec_proc_slot = a["dec_proc_slot"]
    dec_dec_slot = a["dec_dec_slot"]
    sup_raw = a["sup_raw"]
    sup_ptr = a["sup_ptr"]
    inc_item = a["inc_item"]
    inc_ptr = a["inc_ptr"]
    sfac = swing_factors.tolist()
    dfac = support_factors.tolist()
    strict = plan.support_policy == "strict"

    n_groups = len(group_jud_ptr) - 1
    n_decisions = plan.n_decisions

    # 1. perturb each judgment, rescale its maximum back to 100, normalise.
    #    With unit factors the max is already 100, the rescale multiplies by
    #    exactly 1.0 and this reduces bit for bit to plain normalisation.
    work = [0.0] * plan.n_entries
    for j in range(len(jud_ptr) - 1):
        lo, hi = jud_ptr[j], jud_ptr[j + 1]
        peak = 0.0
        for k in range(lo, hi):
            v = entry_raw[k] * sfac[k]
            work[k] = v
            if v > peak:
                peak = v
        scale = 100.0 / peak
        total = 0.0
        for k in range(lo, hi):
            v = work[k] * scale
            work[k] = v
            total += v
        for k in range(lo, hi):
            work[k] = work[k] / total

    # 2. consensus per group: geometric mean across judgments, renormalised;
    #    a single judgment passes through untouched
    slot_vals = [0.0] * plan.n_slots
    for g in range(n_groups):
        jlo, jhi = group_jud_ptr[g], group_jud_ptr[g + 1]
        slo, shi = group_slot_ptr[g], group_slot_ptr[g + 1]
        if jhi - jlo == 1:
            for k in range(jud_ptr[jlo], jud_ptr[jlo + 1]):
                slot_vals[entry_slot[k]] = work[k]
        else:
            exponent = 1.0 / (jhi - jlo)
            for s in range(slo, shi):
                slot_vals[s] = 1.0
            for j in range(jlo, jhi):
                for k in range(jud_ptr[j], jud_ptr[j + 1]):
                    slot_vals[entry_slot[k]] *= work[k]
            total = 0.0
            for s in range(slo, shi):
                slot_vals[s] = slot_vals[s] ** exponent
                total += slot_vals[s]
            for s in range(slo, shi):
                slot_vals[s] = slot_vals[s] / total

    # 3. per-decision weight: value stream x process x decision
    wvec = [0.0] * n_decisions
    for d in range(n_decisions):
        wvec[d] = (slot_vals[dec_vs_slot[d]] * slot_vals[dec_proc_slot[d]]) * slot_vals[
            dec_dec_slot[d]
        ]

    # 4. per-decision support consensus
    dvec = [0.0] * n_decisions
    for d in range(n_decisions):
        lo, hi = sup_ptr[d], sup_ptr[d + 1]
        cnt = 0
        prod = 1.0
        last = 0.0
        zero_seen = False
        for k in range(lo, hi):
            v = sup_raw[k]
            if v == 0.0:
                zero_seen = True
                continue
            pv = v * dfac[k]
            if pv > 0.9:
                pv = 0.9
            cnt += 1
            last = pv
            prod *= pv
        if (strict and zero_seen) or cnt == 0:
            dvec[d] = 0.0
        elif cnt == 1:
            dvec[d] = last
        else:
            dvec[d] = prod ** (1.0 / cnt)

    # 5. spread each decision's weighted support evenly over its items
    scores = [0.0] * plan.n_items
    for d in range(n_decisions):
        lo, hi = inc_ptr[d], inc_ptr[d + 1]
        n = hi - lo
        if n > 0:
            term = (wvec[d] * dvec[d]) / n
            for k in range(lo, hi):
                scores[inc_item[k]] += term

    return np.asarray(scores, dtype=np.float64)
