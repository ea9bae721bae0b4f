#!/usr/bin/env python3
"""Compare the compiled kernel against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Times the two hot loops on workloads shaped like the real call sites:
run-length encoding of estimator buffers, and OOK frame resampling at the
oversampling rates the clamping path uses.
"""

import argparse
import random
import time

from rfnode import _kernel_py

try:
    from rfnode import _kernel
except ImportError:
    _kernel = None


def bench(label, fn, *args, repeat=5, inner=200):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    print(f"  {label:<46} {best * 1e6:9.1f} us/call")
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = random.Random(1)
    buf_512 = bytes(b & 1 for b in rng.randbytes(512))
    preamble = bytes(i & 1 for i in range(640))
    backends = [("pure", _kernel_py)]
    if _kernel is not None:
        backends.append(("compiled", _kernel))
    else:
        print("compiled kernel not built; showing pure only")

    results = {}
    print("run_lengths, 512-sample estimator buffer")
    for name, mod in backends:
        results[name, "rl"] = bench(name, mod.run_lengths, buf_512,
                                    repeat=args.repeat)
    print("sample_emission, 2048 samples at 60 kbps over a 3.4 kbps frame")
    for name, mod in backends:
        results[name, "se"] = bench(
            name, mod.sample_emission, preamble, 3400, 60_000, 0, 0, 2048,
            repeat=args.repeat)

    if _kernel is not None:
        for key, label in (("rl", "run_lengths"), ("se", "sample_emission")):
            speedup = results["pure", key] / results["compiled", key]
            print(f"{label}: compiled is {speedup:.1f}x faster")


if __name__ == "__main__":
    main()
