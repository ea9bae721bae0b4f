"""Kernel selection: compiled extension when built, pure Python otherwise.

Set RFNODE_PURE=1 to force the pure path (used by the benchmark to compare
both backends in one process).
"""

import os

from rfnode import _kernel_py

try:
    from rfnode import _kernel  # type: ignore[attr-defined]
except ImportError:
    _kernel = None

if _kernel is not None and not os.environ.get("RFNODE_PURE"):
    _impl = _kernel
else:
    _impl = _kernel_py

BACKEND = _impl.BACKEND

# The compiled path does the resample index math in int64.  Anything close
# to the limit is handed to the unbounded pure path instead.
_INT64_GUARD = 2**62


def run_lengths(samples):
    return _impl.run_lengths(samples)


def sample_emission(frame_bits, src_rate, out_rate, d0_us, j_base, count):
    if _impl is not _kernel_py:
        magnitude = (abs(d0_us) * out_rate + (j_base + count) * 1_000_000) * src_rate
        if magnitude >= _INT64_GUARD:
            return _kernel_py.sample_emission(
                frame_bits, src_rate, out_rate, d0_us, j_base, count
            )
    return _impl.sample_emission(frame_bits, src_rate, out_rate, d0_us, j_base, count)
