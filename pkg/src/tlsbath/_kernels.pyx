# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled telegraph synthesis kernels.

Mirrors _kernels_py: same path split, same per-path stream consumption, same
delta emission order, so traces are bit-identical with the fallback. See that
module for the contract. Uniforms come straight from the bit generator's
next_double, which is exactly what Generator.random() consumes.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport floor, log1p

from numpy.random cimport bitgen_t

GAP_PATH_MAX_P = 0.25  # keep equal to _kernels_py.GAP_PATH_MAX_P


def accumulate_fluctuator(double[::1] steps, double amplitude,
                          int initial_state, double p, gen):
    """Compiled counterpart of _kernels_py.accumulate_fluctuator."""
    cdef Py_ssize_t n = steps.shape[0]
    cdef bitgen_t *rng
    if n == 0:
        return amplitude * initial_state
    bit_generator = gen.bit_generator
    capsule = bit_generator.capsule
    rng = <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")
    if rng == NULL:
        raise RuntimeError("invalid bit generator capsule")
    with bit_generator.lock:
        if p <= GAP_PATH_MAX_P:
            with nogil:
                _gap_deltas(&steps[0], amplitude, initial_state, p, rng, n)
        else:
            with nogil:
                _scan_deltas(&steps[0], amplitude, initial_state, p, rng, n)
    return amplitude * initial_state


cdef void _gap_deltas(double *steps, double amp, int s0, double p,
                      bitgen_t *rng, Py_ssize_t n) noexcept nogil:
    cdef double log_q = log1p(-p)
    cdef double delta0 = -2.0 * amp * s0
    cdef double u, g
    cdef Py_ssize_t pos = -1
    cdef int parity = 0
    while True:
        u = rng.next_double(rng.state)
        g = floor(log1p(-u) / log_q)
        if g >= <double> n:
            return
        pos = pos + 1 + <Py_ssize_t> g
        if pos >= n:
            return
        if parity == 0:
            steps[pos] += delta0
        else:
            steps[pos] -= delta0
        parity ^= 1


cdef enum:
    _SCAN_BLOCK = 4096


cdef void _scan_deltas(double *steps, double amp, int s0, double p,
                       bitgen_t *rng, Py_ssize_t n) noexcept nogil:
    # branchless hit collection; delta0 * (+-1.0) keeps the emitted values
    # exactly equal to the fallback's
    cdef double delta0 = -2.0 * amp * s0
    cdef double buf[_SCAN_BLOCK]
    cdef int idx[_SCAN_BLOCK]
    cdef Py_ssize_t start = 0, k, i, j, m
    cdef int parity = 0
    while start < n:
        k = n - start
        if k > _SCAN_BLOCK:
            k = _SCAN_BLOCK
        for i in range(k):
            buf[i] = rng.next_double(rng.state)
        m = 0
        for i in range(k):
            idx[m] = <int> i
            m += buf[i] < p
        for j in range(m):
            steps[start + idx[j]] += delta0 * (
                1.0 - 2.0 * <double> ((parity + <int> j) & 1)
            )
        parity = (parity + <int> m) & 1
        start += k
