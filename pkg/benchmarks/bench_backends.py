#!/usr/bin/env python3
"""Benchmark the steady-state batch kernel backends (compiled vs pure Python).

The workload is the hot loop of a Doppler-averaged susceptibility point: one
Liouvillian template plus a velocity-shifted 16x16 steady-state solve per
quadrature node. Run after an editable install:

    python benchmarks/bench_backends.py [--nodes 1501] [--repeats 20]
"""

import argparse
import time

import numpy as np

from chiralkerr import DissipatorSet, build_hamiltonian, build_liouvillian, load_config
from chiralkerr._kernels import available_backends
from chiralkerr.doppler import _diag_shift_coefficients


def build_problem(node_count: int):
    config = load_config("paper-fig2")
    drives = config.drive_configuration()
    diss = DissipatorSet.from_atom(config.atom)
    l_base = np.ascontiguousarray(build_liouvillian(build_hamiltonian(drives), diss))
    coeff = np.ascontiguousarray(_diag_shift_coefficients(drives))
    dist = config.velocity_distribution()
    span = 5.0 * dist.u
    velocities = np.ascontiguousarray(np.linspace(-span, span, node_count))
    return l_base, coeff, velocities


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=1501,
                        help="velocity nodes per batch (default 1501)")
    parser.add_argument("--repeats", type=int, default=20,
                        help="batches per timing run (default 20)")
    args = parser.parse_args()

    l_base, coeff, velocities = build_problem(args.nodes)
    backends = available_backends()
    print(f"workload: {args.repeats} batches x {args.nodes} velocity nodes "
          f"({args.repeats * args.nodes} steady-state solves)")

    results = {}
    timings = {}
    for name, fn in sorted(backends.items()):
        fn(l_base, coeff, velocities)  # warm-up
        t0 = time.perf_counter()
        for _ in range(args.repeats):
            rho, status = fn(l_base, coeff, velocities)
        elapsed = time.perf_counter() - t0
        assert int(np.count_nonzero(status)) == 0
        results[name] = rho
        timings[name] = elapsed
        per_solve = elapsed / (args.repeats * args.nodes)
        print(f"  {name:10s} {elapsed:8.3f} s total   {per_solve * 1e6:8.2f} us/solve")

    if len(timings) == 2:
        speedup = timings["python"] / timings["compiled"]
        diff = float(np.abs(results["python"] - results["compiled"]).max())
        print(f"speedup (python/compiled): {speedup:.1f}x")
        print(f"max |rho| deviation between backends: {diff:.3e}")
    elif "compiled" not in timings:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
