#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the three hot paths (Monte Carlo trial blocks, the exact-outage
bracket product, the bound-I integrand) plus the vectorized Marcum Q1,
and checks both backends agree.  Run from the repository root:

    python3 benchmarks/bench_kernels.py [--trials 65536] [--repeats 3]
"""

import argparse
import math
import time

import numpy as np


def best_of(repeats, fn, *args):
    best = math.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=1 << 16)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--ports", type=int, default=20)
    args = ap.parse_args()

    try:
        from fama_lab import _kernels as compiled
    except ImportError:
        raise SystemExit("compiled extension not built; "
                         "run pip install -e . --no-build-isolation first")
    from fama_lab import _kernels_py as fallback
    from fama_lab.analytic import _lag, _leg01, _theta_rule, THETA_NODES
    from fama_lab.channel import make_geometry

    mu = np.ascontiguousarray(make_geometry(args.ports, 2.0).mu)
    q = 50.0
    c = np.ascontiguousarray(mu**2 / (1.0 - mu**2))

    # exact-outage bracket grid (one 64x64 quadrature panel)
    s2, wth = _theta_rule(THETA_NODES)
    xo, _ = _leg01(64)
    uu = 45.0 * xo
    U = np.ascontiguousarray(np.repeat(uu, 64))
    T = np.ascontiguousarray((uu[:, None] * xo[None, :]).ravel())

    # bound-I grid
    z, _ = _lag(512)
    z = np.ascontiguousarray(z)

    # marcum grid
    rng = np.random.default_rng(7)
    a = np.abs(rng.normal(1.5, 1.0, 100_000))
    b = np.abs(rng.normal(2.5, 1.5, 100_000))

    cases = [
        ("mc_outage_block  (%d trials, N=%d)" % (args.trials, args.ports),
         lambda k: k.mc_outage_block(12345, 0, args.trials, 1.0,
                                     math.sqrt(5.0), 10.0, mu, 0)),
        ("exact_product_grid (4096 pts, N=%d)" % args.ports,
         lambda k: k.exact_product_grid(U, T, q, c, s2, wth)),
        ("ub_product_grid   (512 pts, N=%d)" % args.ports,
         lambda k: k.ub_product_grid(z, q, c)),
        ("marcum_q1_grid    (100k pts)",
         lambda k: k.marcum_q1_grid(a, b)),
    ]

    print(f"{'kernel':44s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}  agreement")
    for name, call in cases:
        tc, rc = best_of(args.repeats, call, compiled)
        tp, rp = best_of(args.repeats, call, fallback)
        if isinstance(rc, tuple):
            agree = "exact" if rc == rp else f"DIFFER {rc} vs {rp}"
        else:
            agree = f"max|diff|={np.max(np.abs(np.asarray(rc) - np.asarray(rp))):.2e}"
        print(f"{name:44s} {tc * 1e3:9.2f}ms {tp * 1e3:9.2f}ms {tp / tc:7.1f}x  {agree}")


if __name__ == "__main__":
    main()
