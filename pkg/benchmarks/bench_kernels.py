"""Time the oracle scoring kernel: compiled extension vs numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--theta-steps 180]
"""

import argparse
import time

import numpy as np

from gaussloc import kernels
from gaussloc.conditioning import GaussianProjector, Homodyne
from gaussloc.gaussian_core import random_pure_state
from gaussloc.localize import _projector_cms, grid_oracle, oracle_candidates


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--theta-steps", type=int, default=180)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    state = random_pure_state(3, rng)
    cm = state.cm
    blocks = cm[:4, :4].copy(), cm[:4, 4:].copy(), cm[4:, 4:].copy()
    cands = oracle_candidates(args.theta_steps)
    pcms = _projector_cms([c for c in cands if isinstance(c, GaussianProjector)])
    dirs = np.array([c.direction() for c in cands if isinstance(c, Homodyne)])

    backends = [("python", kernels.python_backend)]
    if kernels.compiled_backend is not None:
        backends.append(("cython", kernels.compiled_backend))
    else:
        print("compiled extension not built; timing the numpy fallback only")

    print(f"single-mode kernel, {len(cands)} candidates")
    base = None
    for name, mod in backends:
        for measure in (kernels.ENTROPY, kernels.LOG_NEGATIVITY):
            t = best_of(lambda: mod.score_single_mode(*blocks, pcms, dirs, measure), args.repeat)
            tag = "entropy" if measure == kernels.ENTROPY else "logneg"
            rate = len(cands) / t
            print(f"  {name:7s} {tag:8s} {t * 1e3:9.3f} ms  {rate / 1e6:7.2f} M eval/s")
            if measure == kernels.ENTROPY:
                base = base or t
                if name != "python":
                    print(f"  speedup vs numpy: {base / t:.1f}x")

    state4 = random_pure_state(4, rng)
    t = best_of(lambda: grid_oracle(state4, theta_steps=36, r_values=(0.0, 1.0, 3.0)), 1)
    print(f"two-measured-mode oracle (36 steps, active backend {kernels.BACKEND}): {t:.2f} s")


if __name__ == "__main__":
    main()
