"""Pure-numpy sampling kernel: loops events, vectorizes over shots.

Must stay bit-identical to the compiled kernel; both consume the same
pregenerated noise tables and apply them in the same order, so the only
difference is which axis the inner loop runs over.
"""

from __future__ import annotations

import numpy as np

_ONE = np.uint64(1)


def _inject_single(fx, fz, vals, q):
    # vals: (S,) uint8 pauli index (x<<1|z), 0 = none
    word, bit = q >> 6, np.uint64(q & 63)
    v = vals.astype(np.uint64)
    fx[:, word] ^= ((v >> _ONE) & _ONE) << bit
    fz[:, word] ^= (v & _ONE) << bit


def _inject_pair(fx, fz, vals, qa, qb):
    # vals: (S,) uint8 two-qubit pauli (idx_a<<2 | idx_b), 0 = none
    _inject_single(fx, fz, vals >> 2, qa)
    _inject_single(fx, fz, vals & 3, qb)


def _symplectic(fx, fz, row_x, row_z):
    acc = np.bitwise_count(fx & row_z[np.newaxis, :]).sum(axis=1)
    acc += np.bitwise_count(fz & row_x[np.newaxis, :]).sum(axis=1)
    return (acc & 1).astype(np.uint8)


def run_batch(
    ev_x,
    ev_z,
    ev_qa,
    ev_qb,
    ev_det_ptr,
    ev_det_idx,
    bell_col,
    noisy_start,
    e_noisy,
    idle_evt,
    idle_qubit,
    dep,
    bell,
    meas,
    skip,
    idle,
    det_out,
    log_out,
    erased_out,
):
    shots = dep.shape[0]
    words = ev_x.shape[1]
    event_count = ev_qa.size
    logical_count = ev_x.shape[0] - event_count

    fx = np.zeros((shots, words), dtype=np.uint64)
    fz = np.zeros((shots, words), dtype=np.uint64)

    idle_after = {}
    for k in range(idle_evt.size):
        idle_after.setdefault(int(idle_evt[k]), []).append(k)

    for e in range(event_count):
        qa, qb = int(ev_qa[e]), int(ev_qb[e])
        noisy = noisy_start <= e < e_noisy
        col = int(bell_col[e])
        skipped = None
        if noisy and col >= 0:
            skipped = skip[:, col].astype(bool)
            bell_vals = bell[:, col].copy()
            bell_vals[skipped] = 0  # no herald, no pair, no pair error
            _inject_pair(fx, fz, bell_vals, qa, qb)

        flip = _symplectic(fx, fz, ev_x[e], ev_z[e])
        if noisy:
            flip ^= meas[:, e - noisy_start]
        if skipped is not None:
            flip[skipped] = 0
        start, stop = int(ev_det_ptr[e]), int(ev_det_ptr[e + 1])
        for d in ev_det_idx[start:stop]:
            det_out[:, d] ^= flip
            if skipped is not None:
                erased_out[skipped, d] = 1

        if noisy:
            dep_vals = dep[:, e - noisy_start]
            if skipped is not None:
                dep_vals = dep_vals.copy()
                dep_vals[skipped] = 0
            _inject_pair(fx, fz, dep_vals, qa, qb)

        for k in idle_after.get(e, ()):
            _inject_single(fx, fz, idle[:, k], int(idle_qubit[k]))

    for l in range(logical_count):
        log_out[:, l] = _symplectic(fx, fz, ev_x[event_count + l], ev_z[event_count + l])
