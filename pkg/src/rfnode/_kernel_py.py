"""Pure-Python twin of the compiled kernel module.

Same functions, same integer semantics. Python integers are unbounded, so
this path has no overflow limits; it is simply slower.
"""

BACKEND = "pure"

_US = 1_000_000


def run_lengths(samples):
    """Run-length encode a 0/1 sample buffer.

    Returns a list of (value, length) pairs in stream order.
    """
    out = []
    n = len(samples)
    if n == 0:
        return out
    cur = samples[0]
    length = 1
    for i in range(1, n):
        v = samples[i]
        if v == cur:
            length += 1
        else:
            out.append((cur, length))
            cur = v
            length = 1
    out.append((cur, length))
    return out


def sample_emission(frame_bits, src_rate, out_rate, d0_us, j_base, count):
    """Hard-sample a frame's bit sequence onto an output sampling grid.

    Sample j (global index, starting at j_base) occurs d0_us + j*1e6/out_rate
    microseconds after the frame start.  The source bit index for that instant
    is floor(offset_seconds * src_rate), computed with exact integer
    arithmetic.  Instants outside the frame yield 0.
    """
    out = bytearray(count)
    denom = _US * out_rate
    base = d0_us * out_rate
    nbits = len(frame_bits)
    for j in range(count):
        idx = (base + (j_base + j) * _US) * src_rate // denom
        if 0 <= idx < nbits:
            out[j] = frame_bits[idx]
    return bytes(out)
