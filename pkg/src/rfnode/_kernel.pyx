# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels: run-length encoding and OOK frame resampling.

Must stay output-identical to rfnode._kernel_py; the selector in
rfnode.kernels routes to whichever is importable (and guards the integer
ranges this module assumes).
"""

BACKEND = "compiled"

cdef long long _US = 1000000


def run_lengths(samples):
    cdef const unsigned char[:] buf = samples
    cdef Py_ssize_t n = buf.shape[0]
    cdef Py_ssize_t i
    cdef unsigned char cur
    cdef long long length
    out = []
    if n == 0:
        return out
    cur = buf[0]
    length = 1
    for i in range(1, n):
        if buf[i] == cur:
            length += 1
        else:
            out.append((cur, length))
            cur = buf[i]
            length = 1
    out.append((cur, length))
    return out


def sample_emission(frame_bits, long long src_rate, long long out_rate,
                    long long d0_us, long long j_base, Py_ssize_t count):
    cdef const unsigned char[:] bits = frame_bits
    cdef Py_ssize_t nbits = bits.shape[0]
    cdef bytearray out_ba = bytearray(count)
    cdef unsigned char[:] out = out_ba
    cdef long long denom = _US * out_rate
    cdef long long base = d0_us * out_rate
    cdef long long idx
    cdef Py_ssize_t j
    for j in range(count):
        idx = (base + (j_base + j) * _US) * src_rate
        idx = idx // denom
        if 0 <= idx < nbits:
            out[j] = bits[idx]
    return bytes(out_ba)
