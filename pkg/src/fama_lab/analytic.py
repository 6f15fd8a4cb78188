"""Deterministic evaluation of the outage/capacity expressions.

Exact outage (double integral)
------------------------------
In the substituted coordinate u = q z every port bracket depends on
(u, t) only, which removes the q-scale from the integrand:

    P = int_0^inf (1/q) e^{-u/q} int_0^{u} e^{-t} prod_k B_k(u, t) dt du,

    B_k = 1 + q/(q+1) e^{-A (su - st)^2} G(4 A su st) - Q1(al st, al su),

with su = sqrt(u), st = sqrt(t), A = c_k/(q+1), al = sqrt(2 c_k/(q+1)),
c_k = mu_k^2/(1 - mu_k^2), and G the 64-node theta rule replacing the
e^{.} I0(.) factor with strictly non-positive exponents.  The t-range is
truncated at ``tail_cutoff`` (error <= e^{-cutoff}) and the u-axis is
split at u* = cutoff * min(1, q): Gauss-Legendre below (resolves the
1 - e^{-qz} boundary layer for any q), shifted Gauss-Laguerre above.
Node doubling validates the requested tolerance a posteriori.

Upper bound I (single integral)
-------------------------------
The integrand stacks boundary layers e^{-a_k z} at scales 1/a_k that can
span five decades (a_k grows like 1/(1 - mu_k^2)), so the z-integral is
evaluated with Gauss-Legendre in y = log z on [log z_min, log cutoff]:
every exponential layer becomes an O(1)-wide feature in y.  Truncation
errors are q z_min^2 / 2 below and e^{-cutoff} above, both < 1e-16.

Upper bound II (closed form)
----------------------------
The alternating binomial sum with E_k factors, evaluated with the scaled
e^x E_k(x) so the e^{(1-mu^2)/(4 mu^2)} prefactor can never overflow, and
summed exactly (math.fsum) with a cancellation monitor: past 6 lost
decimal digits the term growth C(N-1,k) q^{-k} makes double precision
meaningless and a PrecisionLossError points at the integral bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import roots_legendre

from ._backend import kernels
from .channel import FamaScenario
from .errors import (DomainError, ExactCapError, PrecisionLossError,
                     QuadratureError, SingularCorrelationError)
from .montecarlo import OutageEstimate
from .specfun import bessel_j0, expint_en_scaled

EXACT_CAP = 32       # ports; beyond this the CLI switches to bound-I + MC
THETA_NODES = 64
_MAX_DOUBLINGS = 3
_LOST_DIGITS_CAP = 6.0


@dataclass(frozen=True)
class QuadratureSettings:
    outer_nodes: int = 64
    inner_nodes: int = 64
    tail_cutoff: float = 45.0
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.outer_nodes < 8 or self.inner_nodes < 8:
            raise ValueError("node counts must be >= 8")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be > 0")
        if self.tail_cutoff <= 1.0:
            raise ValueError("tail_cutoff must exceed 1")


DEFAULT_SETTINGS = QuadratureSettings()


@lru_cache(maxsize=64)
def _leg01(n: int):
    x, w = roots_legendre(n)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=64)
def _lag(n: int):
    """Gauss-Laguerre nodes/weights by Golub-Welsch (stable at any order;
    scipy's Newton-based roots_laguerre overflows past ~200 nodes)."""
    k = np.arange(n, dtype=float)
    nodes, vecs = eigh_tridiagonal(2.0 * k + 1.0, np.arange(1, n, dtype=float))
    return nodes, vecs[0] ** 2


@lru_cache(maxsize=4)
def _theta_rule(n: int):
    x, w = roots_legendre(n)
    theta = 0.5 * math.pi * (x + 1.0)
    return np.ascontiguousarray(np.sin(0.5 * theta) ** 2), \
        np.ascontiguousarray(0.5 * w)  # (pi/2) * w / pi


def _corr_factors(mu) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    if np.any(np.abs(mu) >= 1.0):
        raise SingularCorrelationError(
            "|mu_k| = 1 makes the 1/(1 - mu_k^2) factors singular; "
            "use Monte Carlo for fully correlated ports")
    return np.ascontiguousarray(mu * mu / (1.0 - mu * mu))


def _exact_value(q: float, c: np.ndarray, n_out: int, n_in: int,
                 cutoff: float) -> float:
    s2th, wth = _theta_rule(THETA_NODES)
    xo, wo = _leg01(n_out)
    xi, wi = _leg01(n_in)

    # piece A: u in [0, u*], t in [0, u]
    u_star = cutoff * min(1.0, q)
    uu = u_star * xo
    tt = uu[:, None] * xi[None, :]
    flat_u = np.ascontiguousarray(np.repeat(uu, n_in))
    flat_t = np.ascontiguousarray(tt.ravel())
    prod = kernels.exact_product_grid(flat_u, flat_t, q, c, s2th, wth)
    inner = ((uu[:, None] * wi[None, :]) * np.exp(-tt)
             * prod.reshape(n_out, n_in)).sum(axis=1)
    piece_a = float(np.sum(u_star * wo * np.exp(-uu / q) * inner) / q)

    # piece B: z >= z* with Laguerre weight; t in [0, min(qz, cutoff)]
    z_star = u_star / q
    lz, lw = _lag(n_out)
    uu = q * (z_star + lz)
    tcap = np.minimum(uu, cutoff)
    tt = tcap[:, None] * xi[None, :]
    flat_u = np.ascontiguousarray(np.repeat(uu, n_in))
    flat_t = np.ascontiguousarray(tt.ravel())
    prod = kernels.exact_product_grid(flat_u, flat_t, q, c, s2th, wth)
    inner = ((tcap[:, None] * wi[None, :]) * np.exp(-tt)
             * prod.reshape(n_out, n_in)).sum(axis=1)
    piece_b = float(math.exp(-z_star) * np.sum(lw * inner))
    return piece_a + piece_b


def outage_exact(scenario: FamaScenario,
                 settings: QuadratureSettings = DEFAULT_SETTINGS) -> OutageEstimate:
    """Exact SIR outage probability, validated by node doubling."""
    n = scenario.geometry.n_ports
    if n > EXACT_CAP:
        raise ExactCapError(
            f"exact evaluator capped at {EXACT_CAP} ports (got {n}); "
            "use bound or Monte Carlo", cap=EXACT_CAP)
    q = scenario.q
    if q <= 0.0:
        raise DomainError("outage requires q = sigma_i^2 gamma / sigma^2 > 0")
    c = _corr_factors(scenario.geometry.mu)

    n_out, n_in = settings.outer_nodes, settings.inner_nodes
    prev = _exact_value(q, c, n_out, n_in, settings.tail_cutoff)
    delta = math.inf
    for _ in range(_MAX_DOUBLINGS):
        n_out *= 2
        n_in *= 2
        cur = _exact_value(q, c, n_out, n_in, settings.tail_cutoff)
        delta = abs(cur - prev)
        if delta <= settings.tolerance:
            return OutageEstimate(min(max(cur, 0.0), 1.0), 0, 0.0, "exact",
                                  note=f"node-doubling delta {delta:.2e}")
        prev = cur
    raise QuadratureError(
        f"node doubling did not reach tolerance {settings.tolerance:g} "
        f"(last delta {delta:.2e} at {n_out} nodes)")


def _log_grid(q: float, cutoff: float, n_nodes: int):
    """Nodes/weights for int_0^cutoff g(z) dz in y = log z coordinates."""
    y_lo = math.log(1e-9 / max(1.0, q))
    y_hi = math.log(cutoff)
    x, w = roots_legendre(n_nodes)
    y = 0.5 * (y_hi - y_lo) * (x + 1.0) + y_lo
    z = np.exp(y)
    return z, 0.5 * (y_hi - y_lo) * w * z  # dz = z dy


def _ub_integral_value(q: float, c: np.ndarray, n_nodes: int,
                       cutoff: float) -> float:
    z, w = _log_grid(q, cutoff, n_nodes)
    f = kernels.ub_product_grid(np.ascontiguousarray(z), q, c)
    return float(np.sum(w * np.exp(-z) * (-np.expm1(-q * z)) * f))


def outage_ub_integral(scenario: FamaScenario,
                       settings: QuadratureSettings = DEFAULT_SETTINGS) -> OutageEstimate:
    """Integral-form outage upper bound (one z-integral)."""
    q = scenario.q
    if q <= 0.0:
        raise DomainError("outage requires q = sigma_i^2 gamma / sigma^2 > 0")
    c = _corr_factors(scenario.geometry.mu)
    if len(c) == 0:
        return OutageEstimate(q / (1.0 + q), 0, 0.0, "bound-I",
                              note="single port: closed form")
    return _ub_integral_from_c(q, c, settings)


def _ub_integral_from_c(q, c, settings) -> OutageEstimate:
    n_nodes = max(settings.outer_nodes, 96)
    prev = _ub_integral_value(q, c, n_nodes, settings.tail_cutoff)
    delta = math.inf
    for _ in range(_MAX_DOUBLINGS):
        n_nodes *= 2
        cur = _ub_integral_value(q, c, n_nodes, settings.tail_cutoff)
        delta = abs(cur - prev)
        if delta <= settings.tolerance:
            return OutageEstimate(min(max(cur, 0.0), 1.0), 0, 0.0, "bound-I",
                                  note=f"node-doubling delta {delta:.2e}")
        prev = cur
    raise QuadratureError(
        f"node doubling did not reach tolerance {settings.tolerance:g} "
        f"for the integral bound (last delta {delta:.2e})")


def outage_ub_integral_equal_mu(n_ports: int, mu: float, q: float,
                                settings: QuadratureSettings = DEFAULT_SETTINGS
                                ) -> OutageEstimate:
    """Integral bound with |mu_2| = ... = |mu_N| = mu; the product of
    identical factors is taken as a power, so cost is independent of N
    (used as the fallback when the closed form loses precision)."""
    if not 0.0 <= mu < 1.0:
        raise DomainError(f"equal-correlation bound needs 0 <= mu < 1, got {mu}")
    if q <= 0.0:
        raise DomainError("q must be > 0")
    if n_ports == 1:
        return OutageEstimate(q / (1.0 + q), 0, 0.0, "bound-I",
                              note="single port: closed form")
    a = q * (mu * mu / (1.0 - mu * mu)) / (q + 1.0)

    def value(n_nodes):
        z, w = _log_grid(q, settings.tail_cutoff, n_nodes)
        f = (1.0 - np.exp(-a * z) / ((q + 1.0) * (1.0 + 4.0 * a * z))
             ) ** (n_ports - 1)
        return float(np.sum(w * np.exp(-z) * (-np.expm1(-q * z)) * f))

    n_nodes = max(settings.outer_nodes, 96)
    prev = value(n_nodes)
    for _ in range(_MAX_DOUBLINGS):
        n_nodes *= 2
        cur = value(n_nodes)
        if abs(cur - prev) <= settings.tolerance:
            return OutageEstimate(min(max(cur, 0.0), 1.0), 0, 0.0, "bound-I")
        prev = cur
    raise QuadratureError("equal-mu integral bound did not converge")


class ClosedBound(NamedTuple):
    """Closed-form bound with its cancellation diagnostics."""

    value: float          # clamped to [0, 1]
    raw: float            # unclamped alternating sum
    lost_digits: float    # log10(max |term|) - log10(|raw|)
    clamped: bool


def outage_ub_closed_detailed(n_ports: int, mu: float, q: float) -> ClosedBound:
    """Equal-correlation closed-form bound, with diagnostics."""
    if not 0.0 <= mu < 1.0:
        raise DomainError(f"closed-form bound needs 0 <= mu < 1, got {mu}")
    if q <= 0.0:
        raise DomainError(f"closed-form bound needs q > 0, got {q}")
    if n_ports < 1:
        raise DomainError(f"n_ports must be >= 1, got {n_ports}")
    if n_ports == 1:
        # single k = 0 term: E_0 cancels the prefactor exactly
        return ClosedBound(1.0, 1.0, 0.0, False)
    if mu == 0.0:
        # mu -> 0 limit of the pre-binomial integral: independent ports
        raw = (q / (1.0 + q)) ** n_ports
        return ClosedBound(raw, raw, 0.0, False)

    v = (1.0 - mu * mu) / (4.0 * mu * mu)
    log_v = math.log(v)
    log_q = math.log(q)
    lgn = math.lgamma(n_ports)  # log (N-1)!
    terms = [1.0]               # k = 0 term is identically 1
    max_log10 = 0.0
    for k in range(1, n_ports):
        log_mag = (lgn - math.lgamma(k + 1.0) - math.lgamma(n_ports - k)
                   - k * log_q + log_v
                   + math.log(expint_en_scaled(k, 0.25 * k + v)))
        max_log10 = max(max_log10, log_mag / math.log(10.0))
        if log_mag > 700.0:
            raise PrecisionLossError(
                "closed-form bound term overflows double precision; "
                "use outage_ub_integral_equal_mu",
                lost_digits=math.inf)
        terms.append((-1.0 if k % 2 else 1.0) * math.exp(log_mag))
    raw = math.fsum(terms)
    lost = max_log10 - math.log10(max(abs(raw), 1e-300))
    if lost > _LOST_DIGITS_CAP:
        raise PrecisionLossError(
            f"alternating sum cancels ~{lost:.1f} decimal digits "
            f"(N={n_ports}, mu={mu:g}, q={q:g}); "
            "use outage_ub_integral_equal_mu",
            lost_digits=lost)
    value = min(max(raw, 0.0), 1.0)
    return ClosedBound(value, raw, lost, value != raw)


def outage_ub_closed(n_ports: int, mu: float, q: float) -> float:
    """Equal-correlation closed-form outage upper bound (clamped)."""
    return outage_ub_closed_detailed(n_ports, mu, q).value


# ----------------------------------------------------------------------
# Capacity / multiplexing-gain arithmetic
# ----------------------------------------------------------------------

def capacity_lower_bound(scenario: FamaScenario, epsilon: float) -> float:
    """(N_I + 1)(1 - eps) log2(1 + gamma), bits/s/Hz."""
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon outside [0, 1]: {epsilon}")
    return ((scenario.n_interferers + 1) * (1.0 - epsilon)
            * math.log2(1.0 + scenario.gamma))


def multiplexing_gain(n_users: int, epsilon: float) -> float:
    """(N_I + 1)(1 - eps) with n_users = N_I + 1."""
    if n_users < 1:
        raise DomainError(f"n_users must be >= 1, got {n_users}")
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon outside [0, 1]: {epsilon}")
    return n_users * (1.0 - epsilon)


def mg_approx_equal_corr(n_ports: int, mu: float, q: float,
                         n_interferers: int) -> float:
    """min{(N-1)(1-mu^2)(N_I+1)/q, N_I+1}."""
    if n_ports < 2:
        raise DomainError(f"n_ports must be >= 2, got {n_ports}")
    if q <= 0.0:
        raise DomainError(f"q must be > 0, got {q}")
    users = n_interferers + 1
    return min((n_ports - 1) * (1.0 - mu * mu) * users / q, float(users))


def mg_approx_general(n_ports: int, width: float, q: float,
                      n_interferers: int) -> float:
    """min{(N/2-1)(1-J0^2(pi W))(N_I+1)/q, N_I+1}."""
    if n_ports < 3:
        raise DomainError(f"n_ports must be >= 3 so N/2 - 1 > 0, got {n_ports}")
    if q <= 0.0:
        raise DomainError(f"q must be > 0, got {q}")
    users = n_interferers + 1
    j0w = bessel_j0(math.pi * width)
    return min((0.5 * n_ports - 1.0) * (1.0 - j0w * j0w) * users / q,
               float(users))


def more_users_capacity_ratio(gamma: float, n_interferers: int) -> float:
    """Capacity ratio of serving N_I + 1 users at target gamma over two
    users at target N_I gamma: ((N_I+1)/2) / (1 + log_gamma N_I)."""
    if gamma <= 1.0:
        raise DomainError(f"gamma must exceed 1 (log base), got {gamma}")
    if n_interferers < 2:
        raise DomainError(f"n_interferers must be >= 2, got {n_interferers}")
    return 0.5 * (n_interferers + 1) / (1.0 + math.log(n_interferers) / math.log(gamma))
