# cython: language_level=3
"""Compiled trial kernel.

Mirrors _reference.py operation for operation; keep the two in lockstep.
Bit-identical output across backends only holds while both run the same
floating-point operations in the same order.
"""

from libc.math cimport pow


def trial_scores_into(
    const double[::1] entry_raw,
    const Py_ssize_t[::1] entry_slot,
    const Py_ssize_t[::1] jud_ptr,
    const Py_ssize_t[::1] group_jud_ptr,
    const Py_ssize_t[::1] group_slot_ptr,
    const Py_ssize_t[::1] dec_vs_slot,
    const Py_ssize_t[::1] dec_proc_slot,
    const Py_ssize_t[::1] dec_dec_slot,
    const double[::1] sup_raw,
    const Py_ssize_t[::1] sup_ptr,
    const Py_ssize_t[::1] inc_item,
    const Py_ssize_t[::1] inc_ptr,
    bint strict_policy,
    const double[::1] swing_factors,
    const double[::1] support_factors,
    double[::1] work,
    double[::1] slot_vals,
    double[::1] wvec,
    double[::1] dvec,
    double[::1] scores,
):
    cdef Py_ssize_t n_jud = jud_ptr.shape[0] - 1
    cdef Py_ssize_t n_groups = group_jud_ptr.shape[0] - 1
    cdef Py_ssize_t n_dec = wvec.shape[0]
    cdef Py_ssize_t n_items = scores.shape[0]
    cdef Py_ssize_t j, g, d, k, s, lo, hi, jlo, jhi, slo, shi, n, cnt
    cdef double total, v, pv, prod, last, exponent, term, peak, scale
    cdef bint zero_seen

    # 1. perturb each judgment, rescale its maximum back to 100, normalise.
    #    With unit factors the max is already 100, the rescale multiplies by
    #    exactly 1.0 and this reduces bit for bit to plain normalisation.
    for j in range(n_jud):
        lo = jud_ptr[j]
        hi = jud_ptr[j + 1]
        peak = 0.0
        for k in range(lo, hi):
            v = entry_raw[k] * swing_factors[k]
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
    for g in range(n_groups):
        jlo = group_jud_ptr[g]
        jhi = group_jud_ptr[g + 1]
        slo = group_slot_ptr[g]
        shi = group_slot_ptr[g + 1]
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
                slot_vals[s] = pow(slot_vals[s], exponent)
                total += slot_vals[s]
            for s in range(slo, shi):
                slot_vals[s] = slot_vals[s] / total

    # 3. per-decision weight: value stream x process x decision
    for d in range(n_dec):
        wvec[d] = (slot_vals[dec_vs_slot[d]] * slot_vals[dec_proc_slot[d]]) * slot_vals[
            dec_dec_slot[d]
        ]

    # 4. per-decision support consensus
    for d in range(n_dec):
        lo = sup_ptr[d]
        hi = sup_ptr[d + 1]
        cnt = 0
        prod = 1.0
        last = 0.0
        zero_seen = False
        for k in range(lo, hi):
            v = sup_raw[k]
            if v == 0.0:
                zero_seen = True
                continue
            pv = v * support_factors[k]
            if pv > 0.9:
                pv = 0.9
            cnt += 1
            last = pv
            prod *= pv
        if (strict_policy and zero_seen) or cnt == 0:
            dvec[d] = 0.0
        elif cnt == 1:
            dvec[d] = last
        else:
            dvec[d] = pow(prod, 1.0 / cnt)

    # 5. spread each decision's weighted support evenly over its items
    for s in range(n_items):
        scores[s] = 0.0
    for d in range(n_dec):
        lo = inc_ptr[d]
        hi = inc_ptr[d + 1]
        n = hi - lo
        if n > 0:
            term = (wvec[d] * dvec[d]) / n
            for k in range(lo, hi):
                scores[inc_item[k]] += term
