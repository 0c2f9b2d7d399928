"""Evaluation kernels over compiled netlists.

Signals live in a ``uint8`` matrix ``vals[slot, case]``: slots ``0..n_in-1``
are primary inputs, the rest are gate outputs. Combinational ops arrive in
topological order as parallel arrays (opcode, three operand slots, output
slot). Two implementations share one signature: numba-compiled loops and a
numpy path vectorised over the case axis. Set ``HDLKERNEL_DISABLE_NUMBA=1`` to
force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

# opcodes; must agree with gates.CODES
NOR, NOT, AND, OR, XOR, MUX, DFF = range(7)


def _numba_disabled() -> bool:
    return os.environ.get("HDLKERNEL_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# numpy path


def comb_eval_numpy(kind, a, b, c, out, vals):
    for j in range(kind.shape[0]):
        k = kind[j]
        x = vals[a[j]]
        if k == NOR:
            vals[out[j]] = 1 - (x | vals[b[j]])
        elif k == NOT:
            vals[out[j]] = 1 - x
        elif k == AND:
            vals[out[j]] = x & vals[b[j]]
        elif k == OR:
            vals[out[j]] = x | vals[b[j]]
        elif k == XOR:
            vals[out[j]] = x ^ vals[b[j]]
        else:
            vals[out[j]] = np.where(x != 0, vals[b[j]], vals[c[j]])


def sim_numpy(kind, a, b, c, out, dff_d, dff_q, out_slots, n_slots, inputs):
    T, n_in, batch = inputs.shape
    vals = np.zeros((n_slots, batch), dtype=np.uint8)
    state = np.zeros((dff_d.shape[0], batch), dtype=np.uint8)
    result = np.zeros((T, out_slots.shape[0], batch), dtype=np.uint8)
    for t in range(T):
        vals[:n_in] = inputs[t]
        vals[dff_q] = state
        comb_eval_numpy(kind, a, b, c, out, vals)
        result[t] = vals[out_slots]
        state = vals[dff_d].copy()
    return result


def longest_path_numpy(a, b, c, out, delay, n_slots, endpoints):
    arrival = np.zeros(n_slots, dtype=np.int64)
    for j in range(out.shape[0]):
        t = arrival[a[j]]
        if b[j] >= 0:
            t = max(t, arrival[b[j]])
        if c[j] >= 0:
            t = max(t, arrival[c[j]])
        arrival[out[j]] = t + delay[j]
    if endpoints.shape[0] == 0:
        return 0
    return int(arrival[endpoints].max())


# ---------------------------------------------------------------------------
# numba path


def _build_numba():
    from numba import njit

    @njit(cache=True)
    def comb_eval(kind, a, b, c, out, vals):
        batch = vals.shape[1]
        for j in range(kind.shape[0]):
            k = kind[j]
            x = vals[a[j]]
            o = vals[out[j]]
            if k == NOR:
                y = vals[b[j]]
                for i in range(batch):
                    o[i] = 1 - (x[i] | y[i])
            elif k == NOT:
                for i in range(batch):
                    o[i] = 1 - x[i]
            elif k == AND:
                y = vals[b[j]]
                for i in range(batch):
                    o[i] = x[i] & y[i]
            elif k == OR:
                y = vals[b[j]]
                for i in range(batch):
                    o[i] = x[i] | y[i]
            elif k == XOR:
                y = vals[b[j]]
                for i in range(batch):
                    o[i] = x[i] ^ y[i]
            else:
                y = vals[b[j]]
                z = vals[c[j]]
                for i in range(batch):
                    o[i] = y[i] if x[i] != 0 else z[i]

    @njit(cache=True)
    def sim(kind, a, b, c, out, dff_d, dff_q, out_slots, n_slots, inputs):
        T, n_in, batch = inputs.shape
        n_dff = dff_d.shape[0]
        vals = np.zeros((n_slots, batch), dtype=np.uint8)
        state = np.zeros((n_dff, batch), dtype=np.uint8)
        result = np.zeros((T, out_slots.shape[0], batch), dtype=np.uint8)
        for t in range(T):
            for s in range(n_in):
                for i in range(batch):
                    vals[s, i] = inputs[t, s, i]
            for r in range(n_dff):
                for i in range(batch):
                    vals[dff_q[r], i] = state[r, i]
            comb_eval(kind, a, b, c, out, vals)
            for s in range(out_slots.shape[0]):
                for i in range(batch):
                    result[t, s, i] = vals[out_slots[s], i]
            for r in range(n_dff):
                for i in range(batch):
                    state[r, i] = vals[dff_d[r], i]
        return result

    @njit(cache=True)
    def longest_path(a, b, c, out, delay, n_slots, endpoints):
        arrival = np.zeros(n_slots, dtype=np.int64)
        for j in range(out.shape[0]):
            t = arrival[a[j]]
            if b[j] >= 0 and arrival[b[j]] > t:
                t = arrival[b[j]]
            if c[j] >= 0 and arrival[c[j]] > t:
                t = arrival[c[j]]
            arrival[out[j]] = t + delay[j]
        best = 0
        for e in range(endpoints.shape[0]):
            if arrival[endpoints[e]] > best:
                best = arrival[endpoints[e]]
        return best

    return comb_eval, sim, longest_path


try:
    comb_eval_numba, sim_numba, longest_path_numba = _build_numba()
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    comb_eval_numba = sim_numba = longest_path_numba = None
    HAVE_NUMBA = False


def backend() -> str:
    """Name of the active kernel path: ``"numba"`` or ``"numpy"``."""
    return "numba" if HAVE_NUMBA and not _numba_disabled() else "numpy"


def comb_eval(kind, a, b, c, out, vals):
    if backend() == "numba":
        return comb_eval_numba(kind, a, b, c, out, vals)
    return comb_eval_numpy(kind, a, b, c, out, vals)


def sim(kind, a, b, c, out, dff_d, dff_q, out_slots, n_slots, inputs):
    if backend() == "numba":
        return sim_numba(kind, a, b, c, out, dff_d, dff_q, out_slots, n_slots, inputs)
    return sim_numpy(kind, a, b, c, out, dff_d, dff_q, out_slots, n_slots, inputs)


def longest_path(a, b, c, out, delay, n_slots, endpoints):
    if backend() == "numba":
        return int(longest_path_numba(a, b, c, out, delay, n_slots, endpoints))
    return longest_path_numpy(a, b, c, out, delay, n_slots, endpoints)
