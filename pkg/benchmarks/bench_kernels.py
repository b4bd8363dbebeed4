#!/usr/bin/env python3
"""Benchmark the hot kernels on both backends.

The backend is fixed at import time by EVMX_BACKEND, so this script
re-executes itself in a subprocess per backend and prints a comparison.

Usage: python benchmarks/bench_kernels.py [--hashes N] [--muls N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def run_workload(n_hashes: int, n_muls: int) -> dict:
    import random

    from evmx import _kernels as kernels
    from evmx.alu import divmod_nonrestoring, mul_shift_add
    from evmx.keccak import keccak256

    kernels.warm_up()
    rng = random.Random(0xBEEF)
    messages = [rng.randbytes(rng.randint(0, 512)) for _ in range(n_hashes)]
    pairs = [(rng.getrandbits(256), rng.getrandbits(256) | 1) for _ in range(n_muls)]

    t0 = time.perf_counter()
    acc = 0
    for message in messages:
        acc ^= keccak256(message)[0]
    t_hash = time.perf_counter() - t0

    t0 = time.perf_counter()
    for a, b in pairs:
        acc ^= mul_shift_add(a, b) & 1
    t_mul = time.perf_counter() - t0

    t0 = time.perf_counter()
    for a, b in pairs:
        acc ^= divmod_nonrestoring(a, b).remainder & 1
    t_div = time.perf_counter() - t0

    return {
        "backend": kernels.active_backend(),
        "keccak256_per_s": n_hashes / t_hash,
        "mul_per_s": n_muls / t_mul,
        "divmod_per_s": n_muls / t_div,
        "checksum": acc,
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--hashes", type=int, default=2000)
    parser.add_argument("--muls", type=int, default=2000)
    parser.add_argument("--inner", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.inner:
        print(json.dumps(run_workload(args.hashes, args.muls)))
        return

    results = []
    for backend in ("numba", "numpy"):
        env = dict(os.environ, EVMX_BACKEND=backend)
        # the fallback is orders of magnitude slower; scale its workload down
        scale = 1 if backend == "numba" else 20
        proc = subprocess.run(
            [sys.executable, __file__, "--inner",
             "--hashes", str(max(args.hashes // scale, 10)),
             "--muls", str(max(args.muls // scale, 10))],
            env=env, capture_output=True, text=True, check=True,
        )
        results.append(json.loads(proc.stdout.strip().splitlines()[-1]))

    assert results[0]["checksum"] is not None
    print(f"{'kernel':<14} {'numba/s':>12} {'numpy/s':>12} {'speedup':>9}")
    for key, label in (
        ("keccak256_per_s", "keccak256"),
        ("mul_per_s", "mul 256-bit"),
        ("divmod_per_s", "divmod 256"),
    ):
        fast, slow = results[0][key], results[1][key]
        print(f"{label:<14} {fast:>12.0f} {slow:>12.0f} {fast / slow:>8.1f}x")


if __name__ == "__main__":
    main()
