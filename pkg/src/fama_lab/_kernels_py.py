"""Pure-numpy fallback for the hot kernels.

Mirrors the compiled ``_kernels`` extension: identical integer RNG
streams, same Marcum-Q recurrences, same integrand expressions.  Selected
at import time by ``_backend`` when the extension is unavailable (or when
``FAMA_LAB_BACKEND=python`` forces it); the benchmark drives both.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaincc, gammaln

from . import rng

BACKEND_NAME = "python"


# ----------------------------------------------------------------------
# Marcum Q1 on arrays
# ----------------------------------------------------------------------

def marcum_q1_grid(a, b):
    """Vectorized Marcum Q1: Poisson mixture of gamma tails, expanded
    outward from the Poisson mode (same scheme as specfun.marcum_q1)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    alpha = 0.5 * a * a
    beta = 0.5 * b * b
    out = np.empty(np.broadcast(alpha, beta).shape)
    alpha, beta = np.broadcast_arrays(alpha, beta)

    done = beta == 0.0
    out[done] = 1.0
    zero_a = (~done) & (alpha == 0.0)
    out[zero_a] = np.exp(-beta[zero_a])

    live = ~(done | zero_a)
    if not np.any(live):
        return out
    al = alpha[live]
    be = beta[live]
    n0 = np.floor(al)
    with np.errstate(divide="ignore"):
        p = np.exp(-al + n0 * np.log(al) - gammaln(n0 + 1.0))
        tau = np.exp(-be + n0 * np.log(be) - gammaln(n0 + 1.0))
    g = gammaincc(n0 + 1.0, be)

    acc = p * g
    mass = p.copy()
    pu, gu, tu, nu = p.copy(), g.copy(), tau.copy(), n0.copy()
    pd, gd, td, nd = p.copy(), g.copy(), tau.copy(), n0.copy()
    for _ in range(100_000):
        # done when the mass stop is hit or both outward weights underflow
        # (rounding can leave mass stuck just below 1)
        exhausted = (pu <= 1e-18) & ((nd < 1.0) | (pd <= 1e-18))
        if np.all((mass >= 1.0 - 1e-15) | exhausted):
            break
        tu *= be / (nu + 1.0)
        gu = np.minimum(gu + tu, 1.0)
        pu *= al / (nu + 1.0)
        nu += 1.0
        acc += pu * gu
        mass += pu
        down = nd >= 1.0
        if np.any(down):
            gd = np.where(down, np.maximum(gd - td, 0.0), gd)
            td = np.where(down, td * nd / be, td)
            pd = np.where(down, pd * nd / al, 0.0)
            nd = np.where(down, nd - 1.0, nd)
            acc += pd * gd
            mass += pd
    out[live] = np.minimum(acc, 1.0)
    return out


# ----------------------------------------------------------------------
# Quadrature integrands
# ----------------------------------------------------------------------

def exact_product_grid(u, t, q, c, s2th, wth):
    """Product over ports of the Theorem-1 bracket at paired (u, t) points,
    u = q z.  The I0 factor is evaluated only through the non-positive-
    exponent theta rule (wth sums to 1), never as a raw I0."""
    u = np.asarray(u, dtype=float)
    t = np.asarray(t, dtype=float)
    su = np.sqrt(u)
    st = np.sqrt(t)
    prod = np.ones_like(u)
    qfrac = q / (q + 1.0)
    for ck in np.asarray(c, dtype=float):
        big_a = ck / (q + 1.0)
        alpha = math.sqrt(2.0 * ck / (q + 1.0))
        e1 = np.exp(-big_a * (su - st) ** 2)
        g = np.exp(-4.0 * big_a * np.outer(su * st, s2th)) @ wth
        q1 = marcum_q1_grid(alpha * st, alpha * su)
        prod *= 1.0 + qfrac * e1 * g - q1
    return prod


def ub_product_grid(z, q, c):
    """Product over ports of the Theorem-2 integrand factor."""
    z = np.asarray(z, dtype=float)
    prod = np.ones_like(z)
    for ck in np.asarray(c, dtype=float):
        a = q * ck / (q + 1.0)
        prod *= 1.0 - np.exp(-a * z) / ((q + 1.0) * (1.0 + 4.0 * a * z))
    return prod


# ----------------------------------------------------------------------
# Monte Carlo trial block
# ----------------------------------------------------------------------

def mc_outage_block(seed, trial_start, n_trials, sigma, sigma_i, gamma,
                    mu, n_split):
    """Simulate trials [trial_start, trial_start + n_trials).

    ``n_split`` = 0 draws the aggregate interference in one correlated
    block; K >= 1 sums K independent interferer blocks of power
    sigma_i^2 / K (unit data symbols).  Returns (outage_count,
    zero_interference_port_count).
    """
    trials = np.arange(trial_start, trial_start + n_trials, dtype=np.uint64)
    skey = rng.seed_key(seed)
    mu_full = np.concatenate([[1.0], np.asarray(mu, dtype=float)])
    root = np.sqrt(np.maximum(0.0, 1.0 - mu_full**2))
    sd = sigma / math.sqrt(2.0)
    if n_split == 0:
        blocks = [(rng.INTERF_BLOCK, sigma_i / math.sqrt(2.0))]
    else:
        per = (sigma_i / math.sqrt(n_split)) / math.sqrt(2.0)
        blocks = [(rng.INTERF_BLOCK + i, per) for i in range(n_split)]

    dx0, dy0 = rng.gauss_pair(rng.cell_key(skey, trials, rng.DESIRED_BLOCK, 0))
    refs = [rng.gauss_pair(rng.cell_key(skey, trials, blk, 0))
            for blk, _ in blocks]

    best = np.zeros(n_trials)
    n_inf = 0
    for k in range(len(mu_full)):
        if k == 0:
            dre, dim = sd * dx0, sd * dy0
        else:
            xk, yk = rng.gauss_pair(
                rng.cell_key(skey, trials, rng.DESIRED_BLOCK, k))
            dre = sd * (root[k] * xk + mu_full[k] * dx0)
            dim = sd * (root[k] * yk + mu_full[k] * dy0)
        d2 = dre * dre + dim * dim
        ire = np.zeros(n_trials)
        iim = np.zeros(n_trials)
        for (blk, scale), (ix0, iy0) in zip(blocks, refs):
            if k == 0:
                ire += scale * ix0
                iim += scale * iy0
            else:
                xk, yk = rng.gauss_pair(rng.cell_key(skey, trials, blk, k))
                ire += scale * (root[k] * xk + mu_full[k] * ix0)
                iim += scale * (root[k] * yk + mu_full[k] * iy0)
        i2 = ire * ire + iim * iim
        zero_i = i2 == 0.0
        n_inf += int(np.count_nonzero(zero_i))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(zero_i, np.where(d2 > 0.0, np.inf, 0.0), d2 / i2)
        np.maximum(best, ratio, out=best)
    return int(np.count_nonzero(best <= gamma)), n_inf
