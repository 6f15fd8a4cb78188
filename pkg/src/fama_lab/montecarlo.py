"""Port selection and Monte Carlo estimation of outage, capacity and gain.

Trials are sharded into blocks of 2^16 with counter-based per-trial
substreams, so the merge (integer counts) is order-independent: serial
and parallel schedules, and any block partitioning, give identical
results for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .channel import FamaScenario

BLOCK_TRIALS = 1 << 16
Z99 = 2.576  # 99% two-sided normal quantile, fixed CI convention


@dataclass(frozen=True)
class OutageEstimate:
    """Outage probability plus provenance.

    ``ci_halfwidth`` is the 99% normal-approximation half-width for the
    monte-carlo method and 0 for analytic methods.
    """

    probability: float
    trials: int
    ci_halfwidth: float
    method: str  # monte-carlo | exact | bound-I | bound-II
    note: str = ""

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability outside [0, 1]: {self.probability}")


def select_port(desired, interference) -> tuple[int, float]:
    """Best port per the max-|g|/|g_I| rule.

    Returns the 1-based port number and the achieved SIR (ratio of squared
    magnitudes); ties break to the lowest port.  A port with exactly zero
    interference wins with SIR +inf; a port with both magnitudes zero has
    SIR 0.
    """
    d = np.asarray(desired)
    i = np.asarray(interference)
    if d.shape != i.shape or d.ndim != 1 or len(d) == 0:
        raise ValueError("desired/interference must be equal-length nonempty vectors")
    d2 = np.abs(d) ** 2
    i2 = np.abs(i) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        sir = np.where(i2 == 0.0, np.where(d2 > 0.0, np.inf, 0.0), d2 / i2)
    idx = int(np.argmax(sir))  # first occurrence wins ties
    return idx + 1, float(sir[idx])


def estimate_outage(scenario: FamaScenario, trials: int, seed: int,
                    per_interferer: bool = False) -> OutageEstimate:
    """Fraction of trials whose best-port SIR is <= gamma."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if scenario.sigma_i <= 0.0:
        raise ValueError("sigma_i must be > 0: SIR is undefined without interference")
    if per_interferer and scenario.n_interferers < 1:
        raise ValueError("per-interferer sampling needs n_interferers >= 1")
    n_split = scenario.n_interferers if per_interferer else 0
    mu = np.ascontiguousarray(scenario.geometry.mu, dtype=np.float64)

    n_out = 0
    n_inf = 0
    start = 0
    while start < trials:
        count = min(BLOCK_TRIALS, trials - start)
        o, z = kernels.mc_outage_block(seed, start, count, scenario.sigma,
                                       scenario.sigma_i, scenario.gamma,
                                       mu, n_split)
        n_out += o
        n_inf += z
        start += count
    p = n_out / trials
    ci = Z99 * math.sqrt(p * (1.0 - p) / trials)
    note = f"zero-interference ports: {n_inf}" if n_inf else ""
    return OutageEstimate(p, trials, ci, "monte-carlo", note)


def network_metrics_from_outage(outage: float, n_interferers: int,
                                gamma: float) -> tuple[float, float]:
    """(capacity lower bound [bits/s/Hz], multiplexing gain) from an
    outage probability: (N_I + 1)(1 - eps) log2(1 + gamma) and
    (N_I + 1)(1 - eps)."""
    if not 0.0 <= outage <= 1.0:
        raise ValueError(f"outage outside [0, 1]: {outage}")
    gain = (n_interferers + 1) * (1.0 - outage)
    return gain * math.log2(1.0 + gamma), gain


def estimate_network_metrics(scenario: FamaScenario, trials: int,
                             seed: int) -> tuple[float, float]:
    """Monte Carlo (capacity lower bound, multiplexing gain)."""
    est = estimate_outage(scenario, trials, seed)
    return network_metrics_from_outage(est.probability, scenario.n_interferers,
                                       scenario.gamma)
