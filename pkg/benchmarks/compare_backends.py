"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the same workloads in two fresh interpreters, one per backend (the
backend is chosen at import time via NKCOALITION_NO_NUMBA), times them, and
checks that both produce bit-identical results.

Usage:
    python3 benchmarks/compare_backends.py [--rounds 20] [--landscapes 200]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from nkcoalition import kernels
from nkcoalition.engine import ScenarioConfig, run_scenario
from nkcoalition.landscape import build_interaction_matrix, generate_landscape

rounds, n_landscapes = json.loads(sys.argv[1])
kernels.warm_up()

# workload 1: landscape generation incl. exhaustive 2^12 enumeration
matrix = build_interaction_matrix("full", 11)
t0 = time.perf_counter()
checksum = 0.0
for seed in range(n_landscapes):
    land = generate_landscape(matrix, np.random.default_rng(seed))
    checksum += land.global_max
t_land = time.perf_counter() - t0

# workload 2: one full scenario (auction every step, fast learners)
cfg = ScenarioConfig(k=11, structure="full", p=0.5, tau=1, rounds=rounds,
                     master_seed=7, t_max=200)
t0 = time.perf_counter()
result = run_scenario(cfg)
t_sim = time.perf_counter() - t0

print(json.dumps({
    "backend": kernels.backend_name(),
    "landscape_s": t_land,
    "scenario_s": t_sim,
    "landscape_checksum": checksum.hex(),
    "distance": result.distance.hex(),
}))
"""


def run_backend(disable_numba: bool, rounds: int, n_landscapes: int) -> dict:
    env = dict(os.environ, NKCOALITION_NO_NUMBA="1" if disable_numba else "0")
    out = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps([rounds, n_landscapes])],
        capture_output=True, text=True, env=env,
    )
    if out.returncode != 0:
        sys.stderr.write(out.stderr)
        raise SystemExit(out.returncode)
    return json.loads(out.stdout)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rounds", type=int, default=20, help="rounds for the scenario workload")
    parser.add_argument("--landscapes", type=int, default=200, help="landscapes for the enumeration workload")
    args = parser.parse_args()

    print(f"workloads: {args.landscapes} landscape generations, "
          f"1 scenario x {args.rounds} rounds x 200 steps (K=11, p=0.5, tau=1)")
    results = {}
    for disable in (False, True):
        r = run_backend(disable, args.rounds, args.landscapes)
        results[r["backend"]] = r
        print(f"  {r['backend']:>5}: landscapes {r['landscape_s']:7.2f}s   scenario {r['scenario_s']:7.2f}s")

    numba, numpy_ = results["numba"], results["numpy"]
    print(f"speedup: landscapes {numpy_['landscape_s'] / numba['landscape_s']:.1f}x, "
          f"scenario {numpy_['scenario_s'] / numba['scenario_s']:.1f}x")

    same = (numba["landscape_checksum"] == numpy_["landscape_checksum"]
            and numba["distance"] == numpy_["distance"])
    print("results bit-identical across backends:", "yes" if same else "NO")
    if not same:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
