"""Compare the compiled and pure-Python enumeration kernels.

    python benchmarks/bench_kernels.py --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from syscow import _pykernels

try:
    from syscow import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def ball_case(rng: np.random.Generator, d: int, radius: float):
    b = rng.integers(-5, 6, size=(d, d)).astype(float)
    while abs(np.linalg.det(b)) < 1:
        b = rng.integers(-5, 6, size=(d, d)).astype(float)
    r = np.linalg.cholesky(b.T @ b).T
    return r, radius * radius * abs(np.linalg.det(b)) ** (2 / d)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    if _ckernels is None:
        print("compiled kernels are not built; only the Python timings are shown")

    print(f"{'kernel':<34} {'python (s)':>11} {'cython (s)':>11} {'speedup':>8}")
    cases = []
    for d, radius in ((3, 20.0), (4, 9.0), (6, 4.0)):
        r, r2 = ball_case(rng, d, radius)
        count = len(_pykernels.enumerate_ball(r, r2, 10**8)[0])
        cases.append((f"enumerate_ball d={d} ({count} pts)", "enumerate_ball", (r, r2, 10**8)))
    for n in (4, 5, 6):
        mats = [rng.integers(-9, 10, size=(n, n)).tolist() for _ in range(2000)]
        budget = (n + 2) // 2 * ((n + 1) - (n + 1) // 2) + 2
        cases.append((f"min_cost_nonzero n={n} (2000 bases)", "min_cost_nonzero", (mats, budget)))

    for label, name, payload in cases:
        def run(mod, name=name, payload=payload):
            if name == "min_cost_nonzero":
                mats, budget = payload
                return lambda: [mod.min_cost_nonzero(m, budget) for m in mats]
            return lambda: mod.enumerate_ball(*payload)

        t_py = best_of(run(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{label:<34} {t_py:>11.4f} {'-':>11} {'-':>8}")
            continue
        t_c = best_of(run(_ckernels), args.repeat)
        print(f"{label:<34} {t_py:>11.4f} {t_c:>11.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
