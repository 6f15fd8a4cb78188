"""Inverse design: minimum ports, minimum width, critical correlation.

All functions are pure.  Infeasible targets raise
``InfeasibleDesignError`` carrying the reason and the closest achievable
value, so CLI sweeps can tabulate infeasible cells instead of aborting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .analytic import (QuadratureSettings, DEFAULT_SETTINGS,
                       outage_ub_closed, outage_ub_integral_equal_mu)
from .errors import DomainError, InfeasibleDesignError, PrecisionLossError
from .specfun import bessel_j0, j0_envelope_inverse

_N_SEARCH_CAP = 1 << 22


@dataclass(frozen=True)
class DesignTarget:
    """Target multiplexing gain m at SIR target gamma with N_I interferers.

    ``q`` defaults to N_I * gamma (statistically identical users)."""

    mult_gain: float
    gamma: float
    n_interferers: int
    q: Optional[float] = None

    def __post_init__(self):
        if self.mult_gain <= 0.0:
            raise ValueError(f"mult_gain must be > 0, got {self.mult_gain}")
        if self.gamma <= 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.n_interferers < 1:
            raise ValueError(f"n_interferers must be >= 1, got {self.n_interferers}")
        if self.q is None:
            object.__setattr__(self, "q", self.n_interferers * self.gamma)
        if self.q <= 0.0:
            raise ValueError(f"q must be > 0, got {self.q}")
        if self.mult_gain > self.n_interferers + 1:
            raise ValueError(
                f"mult_gain {self.mult_gain} exceeds the user count "
                f"{self.n_interferers + 1}; unreachable for any (N, W)")

    @property
    def users(self) -> int:
        return self.n_interferers + 1

    @property
    def outage_budget(self) -> float:
        """Largest tolerable outage: 1 - m/(N_I + 1)."""
        return 1.0 - self.mult_gain / self.users


def _equal_corr_bound(n_ports: int, mu: float, q: float,
                      settings: QuadratureSettings) -> float:
    """Closed-form bound, integral fallback on cancellation loss."""
    try:
        return outage_ub_closed(n_ports, mu, q)
    except PrecisionLossError:
        return outage_ub_integral_equal_mu(n_ports, mu, q, settings).probability


def min_ports_equal_corr(target: DesignTarget, mu: float,
                         settings: QuadratureSettings = DEFAULT_SETTINGS) -> int:
    """Smallest N with outage_ub_closed(N, mu, q) <= 1 - m/(N_I+1),
    by exponential doubling then bisection (the bound is monotone in N)."""
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    budget = target.outage_budget

    def ok(n: int) -> bool:
        return _equal_corr_bound(n, mu, target.q, settings) <= budget

    if budget <= 0.0:
        raise InfeasibleDesignError(
            "gain target equals the user count: the outage bound is "
            "positive at every finite N",
            closest=target.users * (1.0 - _equal_corr_bound(
                _N_SEARCH_CAP, mu, target.q, settings)))

    lo, hi = 1, 2
    while not ok(hi):
        lo = hi
        hi *= 2
        if hi > _N_SEARCH_CAP:
            eps = _equal_corr_bound(_N_SEARCH_CAP, mu, target.q, settings)
            raise InfeasibleDesignError(
                f"condition unsatisfied up to N = {_N_SEARCH_CAP}",
                closest=target.users * (1.0 - eps))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


class CriticalMu(NamedTuple):
    """Exact-form and approximate critical correlation, with provenance."""

    exact: Optional[float]
    approx: float
    note: str


def critical_mu(target: DesignTarget, n_ports: int) -> CriticalMu:
    """Largest tolerable autocorrelation for gain m at fixed N.

    The exact form is the ratio of the two alternating binomial sums,
    evaluated through their binomial-theorem closed forms
    sum_k C(n,k)(-1)^{k+1} x^k = 1 - (1-x)^n and
    sum_k k C(n,k)(-1)^{k+1} x^k = n x (1-x)^{n-1}, which are free of
    cancellation at any N.  The approximate form is
    sqrt(1 - m q / ((N_I+1)(N-1))), clamped to [0, 1].
    """
    if n_ports < 2:
        raise DomainError(f"n_ports must be >= 2, got {n_ports}")
    q = target.q
    share = target.mult_gain / target.users
    approx_arg = 1.0 - share * q / (n_ports - 1)
    if approx_arg < 0.0:
        raise InfeasibleDesignError(
            f"N too small for target: N - 1 must reach m q / (N_I+1) "
            f"= {share * q:.6g}",
            closest=target.users * (n_ports - 1) / q)
    approx = min(math.sqrt(approx_arg), 1.0)

    x = 1.0 / q
    s1 = 1.0 - (1.0 - x) ** (n_ports - 1)
    s2 = (n_ports - 1) * x * (1.0 - x) ** (n_ports - 2)
    note = ""
    exact: Optional[float] = None
    if s2 > 0.0 and s1 - share >= 0.0:
        exact = min(math.sqrt((s1 - share) / s2), 1.0)
    else:
        note = "exact form infeasible at this (N, q); approximate form returned"
    return CriticalMu(exact, approx, note)


def min_width(target: DesignTarget, n_ports: int) -> float:
    """Minimum antenna width (wavelengths) for gain m at fixed N:
    W = J0_envelope_inverse(mu*) / pi with the half-port construction."""
    half = n_ports // 2
    if half < 2:
        raise DomainError(f"floor(N/2) must be >= 2, got N = {n_ports}")
    share = target.mult_gain / target.users
    arg = 1.0 - share * target.q / (half - 1)
    if arg < 0.0:
        raise InfeasibleDesignError(
            "N too small for target: floor(N/2) - 1 must reach "
            f"m q / (N_I+1) = {share * target.q:.6g}",
            closest=target.users * (half - 1) / target.q)
    if arg == 0.0:
        raise InfeasibleDesignError(
            "mu* = 0: |J0| returns arbitrarily close to every level, so no "
            "finite width keeps the envelope at zero")
    mu_star = min(math.sqrt(arg), 1.0)
    return j0_envelope_inverse(mu_star) / math.pi


def min_ports_general(target: DesignTarget, width: float) -> int:
    """Smallest even N with N >= 2 [m q / ((N_I+1)(1 - J0^2(pi W))) + 1]."""
    if width <= 0.0:
        raise InfeasibleDesignError(
            "width must be positive: W = 0 leaves all ports fully "
            "correlated and no finite N suffices")
    j0w = bessel_j0(math.pi * width)
    denom = 1.0 - j0w * j0w
    share = target.mult_gain / target.users
    n = math.ceil(2.0 * (share * target.q / denom + 1.0))
    if n % 2:
        n += 1
    return max(n, 4)
