"""Pure-numpy telegraph synthesis kernels.

The compiled extension implements the same contract; both consume each
fluctuator's uniform stream identically (gap path: one draw per toggle plus
the draw that crosses the end; scan path: one draw per sample), and both emit
the same state-change deltas in the same order, so traces are bit-identical
across backends. The path split at GAP_PATH_MAX_P is part of that contract
and must not drift.
"""

from __future__ import annotations

import numpy as np

GAP_PATH_MAX_P = 0.25

_SCAN_CHUNK = 1 << 16  # cache-sized; chunking has no effect on the stream


def accumulate_fluctuator(steps, amplitude, initial_state, p, gen):
    """Add one fluctuator's state-change deltas into the shared buffer.

    A toggle at sample k flips the state for samples >= k; the caller forms
    the trace as baseline + cumsum(steps). Returns the fluctuator's baseline
    contribution, amplitude * initial_state.
    """
    n = steps.shape[0]
    if p <= GAP_PATH_MAX_P:
        _gap_deltas(steps, amplitude, initial_state, p, gen, n)
    else:
        _scan_deltas(steps, amplitude, initial_state, p, gen, n)
    return amplitude * initial_state


def _gap_deltas(steps, amp, s0, p, gen, n):
    # geometric gaps between toggles: one uniform per toggle
    log_q = np.log1p(-p)
    delta0 = -2.0 * amp * s0
    pos = -1
    parity = 0
    while True:
        k = max(64, int((n - pos) * p * 1.2) + 16)
        u = gen.random(k)
        gaps = 1 + np.floor(np.log1p(-u) / log_q).astype(np.int64)
        positions = pos + np.cumsum(gaps)
        idx = int(np.searchsorted(positions, n, side="left"))
        hit = positions[:idx]
        if hit.size:
            deltas = np.empty(hit.size)
            d_even = delta0 if parity == 0 else -delta0
            deltas[0::2] = d_even
            deltas[1::2] = -d_even
            steps[hit] += deltas
            parity ^= hit.size & 1
        if idx < positions.size:
            return
        pos = int(positions[-1])


def _scan_deltas(steps, amp, s0, p, gen, n):
    # one uniform per sample; toggle where u < p
    delta0 = -2.0 * amp * s0
    parity = 0
    start = 0
    while start < n:
        k = min(_SCAN_CHUNK, n - start)
        u = gen.random(k)
        hit = np.nonzero(u < p)[0]
        if hit.size:
            hit += start
            deltas = np.empty(hit.size)
            d_even = delta0 if parity == 0 else -delta0
            deltas[0::2] = d_even
            deltas[1::2] = -d_even
            steps[hit] += deltas
            parity ^= hit.size & 1
        start += k


def toggle_positions(p, n, gen):
    """Sample indices at which the state flips, consuming the stream exactly
    as accumulate_fluctuator does. Reference implementation for diagnostics;
    independent of the backend choice."""
    if p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p <= GAP_PATH_MAX_P:
        log_q = np.log1p(-p)
        out = []
        pos = -1
        while True:
            k = max(64, int((n - pos) * p * 1.2) + 16)
            u = gen.random(k)
            gaps = 1 + np.floor(np.log1p(-u) / log_q).astype(np.int64)
            positions = pos + np.cumsum(gaps)
            idx = int(np.searchsorted(positions, n, side="left"))
            out.append(positions[:idx])
            if idx < positions.size:
                return np.concatenate(out)
            pos = int(positions[-1])
    hits = []
    start = 0
    while start < n:
        k = min(_SCAN_CHUNK, n - start)
        u = gen.random(k)
        hits.append(start + np.nonzero(u < p)[0])
        start += k
    return np.concatenate(hits)
