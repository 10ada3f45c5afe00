"""Timing comparison of the jit-compiled and pure-numpy kernel paths.

Covers the single-point shell summation at arities 1..3 and the batched
node sweep the quadrature layer drives. Run from the repo root:

    python3 benchmarks/bench_kernels.py [--repeat N]

The two paths must agree to machine precision; the table reports the
max deviation alongside the speedup.
"""

import argparse
import time

import numpy as np

from lauricella._jit import NUMBA_ENABLED
from lauricella.kernels import batch_shell_sum, shell_sum


def _fa_arrays(r, alpha, betas, gammas, xs, s_max):
    m = np.arange(s_max, dtype=np.float64)
    AS = alpha + m
    AU = [x * (b + m) / ((g + m) * (m + 1.0))
          for b, g, x in zip(betas, gammas, xs)]
    P = [(b + m) / ((g + m) * (m + 1.0)) for b, g in zip(betas, gammas)]
    return AS, AU, np.ascontiguousarray(np.stack(P))


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_single(repeat):
    rows = []
    rng = np.random.default_rng(11)
    for r, s_max in ((1, 4000), (2, 400), (3, 120)):
        betas = rng.uniform(0.3, 1.5, r)
        gammas = betas + rng.uniform(0.5, 1.5, r)
        xs = np.full(r, 0.85 / r)
        AS, AU, _ = _fa_arrays(r, 0.7, betas, gammas, xs, s_max)

        def run(flag):
            return shell_sum(r, AS, AU, 1e-14, 0.995, s_max,
                             use_numba=flag)[0]

        run(True)   # compile outside the timed region
        t_jit, v_jit = _time(lambda: run(True), repeat)
        t_np, v_np = _time(lambda: run(False), repeat)
        rows.append((f"shell_sum r={r} s_max={s_max}", t_jit, t_np,
                     abs(v_jit - v_np)))
    return rows


def bench_batch(repeat):
    rows = []
    rng = np.random.default_rng(12)
    for r, n, s_max in ((1, 100_000, 64), (2, 20_000, 64), (3, 2_000, 48)):
        betas = rng.uniform(0.3, 1.5, r)
        gammas = betas + rng.uniform(0.5, 1.5, r)
        AS, _, P = _fa_arrays(r, 0.7, betas, gammas, np.ones(r), s_max)
        coords = [np.ascontiguousarray(rng.uniform(-0.3, 0.3, n) / r)
                  for _ in range(r)]

        def run(flag):
            return batch_shell_sum(r, AS, P, coords, 1e-14, 0.8, s_max,
                                   use_numba=flag)[0]

        run(True)
        t_jit, v_jit = _time(lambda: run(True), repeat)
        t_np, v_np = _time(lambda: run(False), repeat)
        rows.append((f"batch r={r} n={n}", t_jit, t_np,
                     float(np.max(np.abs(v_jit - v_np)))))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not NUMBA_ENABLED:
        print("note: jit path unavailable or disabled; both columns run "
              "the numpy fallback")
    rows = bench_single(args.repeat) + bench_batch(args.repeat)
    w = max(len(r[0]) for r in rows)
    print(f"{'case':<{w}}  {'jit (ms)':>10}  {'numpy (ms)':>10}  "
          f"{'speedup':>8}  {'max |diff|':>10}")
    for name, t_jit, t_np, diff in rows:
        print(f"{name:<{w}}  {t_jit * 1e3:>10.3f}  {t_np * 1e3:>10.3f}  "
              f"{t_np / t_jit:>8.2f}  {diff:>10.2e}")


if __name__ == "__main__":
    main()
