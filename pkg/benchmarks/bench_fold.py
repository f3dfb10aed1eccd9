#!/usr/bin/env python3
"""Benchmark: compiled EMA fold kernel vs the pure-Python twin.

Runs the full 3-parameter moving estimator (adaptive nu, table lookups
and log-densities per step) over a synthetic regime-switching series and
reports steps/second for each backend.

    python3 benchmarks/bench_fold.py [--steps N] [--repeats R]
"""

import argparse
import time

import numpy as np

from movingt import _fold_py
from movingt.adaptive import AdaptiveConfig, _inversion_arrays, seed_state_from_prefix
from movingt.data_io import Segment, generate_synthetic

try:
    from movingt import _fold as _fold_c
except ImportError:
    _fold_c = None


def _time_fold(impl, values, t_start, state, cfg, ratio_asc, ln_nu, repeats):
    n = values.size - t_start
    outs = [np.empty(n) for _ in range(4)]
    nu_fixed = float("nan") if cfg.nu_fixed is None else cfg.nu_fixed
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.run_fold(values, t_start, state.mu, state.m_sigma, state.m1,
                      state.m2, cfg.eta1, cfg.eta2, cfg.eta3,
                      cfg.p_sigma, cfg.p1, cfg.p2,
                      nu_fixed, cfg.nu_adjustment, cfg.nu_cap,
                      cfg.moment_floor, ratio_asc, ln_nu, *outs)
        best = min(best, time.perf_counter() - t0)
    return best, outs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=500_000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    half = args.steps // 2
    series = generate_synthetic(
        [Segment(half, 0.0, 1.0, 5.0), Segment(args.steps - half, 0.0, 3.0, 8.0)],
        seed=12345)
    values = series.values
    cfg = AdaptiveConfig()
    state = seed_state_from_prefix(values, 300, cfg)
    ratio_asc, ln_nu = _inversion_arrays(cfg)
    n = values.size - 300

    t_py, out_py = _time_fold(_fold_py, values, 300, state, cfg,
                              ratio_asc, ln_nu, args.repeats)
    print(f"python fold: {t_py:.3f}s  ({n / t_py / 1e6:.2f} M steps/s)")

    if _fold_c is None:
        print("compiled fold: not built")
        return

    t_c, out_c = _time_fold(_fold_c, values, 300, state, cfg,
                            ratio_asc, ln_nu, args.repeats)
    print(f"compiled fold: {t_c:.3f}s  ({n / t_c / 1e6:.2f} M steps/s)")
    print(f"speedup: {t_py / t_c:.1f}x")

    worst = max(float(np.max(np.abs(a - b))) for a, b in zip(out_py, out_c))
    print(f"max abs output difference between backends: {worst:.3e}")


if __name__ == "__main__":
    main()
