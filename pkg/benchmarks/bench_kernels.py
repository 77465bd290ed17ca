"""Timing comparison of the compiled and pure-Python solver kernels.

Runs the dependence Newton solve and the sphere-grid residual scan on a few
fixture maps with identical inputs for each available backend and prints the
per-call timings side by side.  The compiled extension is optional; when it
is not importable only the fallback column is shown.

Usage: python3 benchmarks/bench_kernels.py [--seeds N] [--grid N] [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mnov.milnor import SolverConfig
from mnov.milnor import systems
from mnov.poly import parse_rational
from mnov._kernels import fallback

try:
    from mnov._kernels import native
except ImportError:
    native = None

FIXTURES = [
    ("z*w/(4*z-1)", 1.0),
    ("4*w+3*(w^2+z^2)", 1.0),
    ("(z^2+w^2)/(z^2-w^2)", 1.0),
    ("1-z^2+3*z^6+(0.01*w)^3-3*0.01*w", 1.0),
]


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_newton(backend, pack, r, seeds, cfg):
    x0 = seeds.copy()
    return lambda: backend.newton_dependence(
        pack, r, x0.copy(), cfg.newton_tol, cfg.max_newton_iters
    )


def bench_grid(backend, pack, z, w):
    return lambda: backend.oracle_residual(pack, z, w, 1e-10)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=400)
    parser.add_argument("--grid", type=int, default=48)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = [("fallback", fallback)]
    if native is not None:
        backends.insert(0, ("native", native))
    names = [name for name, _ in backends]
    print(f"backends: {', '.join(names)}")
    print(f"{args.seeds} seeds, {args.grid}^3 grid cells, best of {args.repeat}")
    header = f"{'task':42s}" + "".join(f"{name:>12s}" for name in names)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)

    cfg = SolverConfig(seed_count=args.seeds, grid_resolution=args.grid)
    for text, r in FIXTURES:
        F = parse_rational(text)
        pack = systems.build_pack(F)
        rng = np.random.default_rng(cfg.rng_seed)
        seeds = systems.dependence_seeds(rng, cfg.seed_count, r)
        n = cfg.grid_resolution
        eta = (np.arange(n) + 0.5) * (0.5 * np.pi / n)
        xi = np.arange(n) * (2.0 * np.pi / n)
        e, x1, x2 = np.meshgrid(eta, xi, xi, indexing="ij")
        z = (r * np.cos(e) * np.exp(1j * x1)).reshape(-1)
        w = (r * np.sin(e) * np.exp(1j * x2)).reshape(-1)
        for task, make in (
            ("newton", lambda b: bench_newton(b, pack, r, seeds, cfg)),
            ("grid", lambda b: bench_grid(b, pack, z, w)),
        ):
            times = [time_call(make(impl), args.repeat) for _, impl in backends]
            row = f"{text[:36]:36s} {task:5s}" + "".join(
                f"{t * 1e3:10.2f}ms" for t in times
            )
            if len(times) == 2 and times[0] > 0:
                row += f"{times[1] / times[0]:9.1f}x"
            print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
