"""Timing comparison of the compiled and pure-python synthesis kernels.

Runs the same calibrated bath through both backends, checks the traces are
bit-identical, and prints draws-per-second for each. Usage:

    python3 benchmarks/synth_benchmark.py [n_fluct] [n_samples]
"""

import sys
import time

import numpy as np

from tlsbath import bath

try:
    from tlsbath import _kernels as compiled
except ImportError:
    compiled = None
from tlsbath import _kernels_py as python_mod


def run_backend(kernels, ensemble, n_samples):
    steps = np.zeros(n_samples)
    base = 0.0
    for f in ensemble:
        p = bath.toggle_probability(f.switch_rate, DT)
        gen = np.random.Generator(
            np.random.Philox(np.random.SeedSequence([SEED, f.stream_id]))
        )
        kernels.accumulate_fluctuator(steps, f.amplitude, f.initial_state,
                                      p, gen)
        base += f.amplitude * f.initial_state
    return np.cumsum(steps) + base


DT = 0.05
SEED = 1234


def main():
    n_fluct = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    n_samples = int(sys.argv[2]) if len(sys.argv) > 2 else 200_000
    ensemble = bath.sample_bath(n_fluct, 1e-4, 1e4, 1e-17, seed=7)
    print(f"{n_fluct} fluctuators over 8 rate decades, "
          f"{n_samples} samples at dt = {DT} s")

    results = {}
    for name, mod in (("python", python_mod), ("compiled", compiled)):
        if mod is None:
            print(f"{name:>9}: extension not built, skipped")
            continue
        t0 = time.perf_counter()
        trace = run_backend(mod, ensemble, n_samples)
        elapsed = time.perf_counter() - t0
        results[name] = trace
        rate = n_fluct * n_samples / elapsed
        print(f"{name:>9}: {elapsed:8.3f} s   ({rate:.3g} draws/s)")

    if len(results) == 2:
        if not np.array_equal(results["python"], results["compiled"]):
            raise SystemExit("backends disagree: traces are not bit-identical")
        print("traces bit-identical across backends")


if __name__ == "__main__":
    main()
