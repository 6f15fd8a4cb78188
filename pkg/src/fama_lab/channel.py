"""Port geometry, scenario parameters and correlated channel sampling.

The N ports sit evenly on a line of length W wavelengths; port 1 is the
reference.  Port k correlates with the reference through

    mu_k = J0(2 pi (k - 1) W / (N - 1)),      k = 2..N,

and one channel realization is built from shared/independent Gaussian
pairs as

    g_1 = sigma (x0 + j y0)
    g_k = sigma (sqrt(1 - mu_k^2) x_k + mu_k x0)
        + j sigma (sqrt(1 - mu_k^2) y_k + mu_k y0)

with all variates N(0, 1/2).  The interference vector uses the identical
construction with its own variates and scale sigma_I.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi, sqrt

import numpy as np

from . import rng, specfun


@dataclass(frozen=True)
class PortGeometry:
    """Number of ports, normalized width and the derived mu_2..mu_N."""

    n_ports: int
    width: float
    mu: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_ports < 1:
            raise ValueError(f"n_ports must be >= 1, got {self.n_ports}")
        if self.width < 0.0:
            raise ValueError(f"width must be >= 0, got {self.width}")
        if len(self.mu) != self.n_ports - 1:
            raise ValueError("mu must hold entries for ports 2..N")


def make_geometry(n_ports: int, width: float) -> PortGeometry:
    """Evenly spaced ports on a W-wavelength line; mu from J0."""
    if n_ports < 1:
        raise ValueError(f"n_ports must be >= 1, got {n_ports}")
    if width < 0.0:
        raise ValueError(f"width must be >= 0, got {width}")
    if n_ports == 1:
        mu = np.empty(0)
    elif width == 0.0:
        mu = np.ones(n_ports - 1)
    else:
        mu = np.array([
            specfun.bessel_j0(2.0 * pi * (k - 1) * width / (n_ports - 1))
            for k in range(2, n_ports + 1)
        ])
    return PortGeometry(n_ports, float(width), mu)


@dataclass(frozen=True)
class FamaScenario:
    """One analysis point: geometry plus (sigma, sigma_I, N_I, gamma)."""

    geometry: PortGeometry
    sigma: float
    sigma_i: float
    n_interferers: int
    gamma: float

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.sigma_i < 0.0:
            raise ValueError(f"sigma_i must be >= 0, got {self.sigma_i}")
        if self.n_interferers < 0:
            raise ValueError(f"n_interferers must be >= 0, got {self.n_interferers}")
        if self.gamma <= 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")

    @property
    def q(self) -> float:
        """Interference-scaled SIR target sigma_I^2 gamma / sigma^2."""
        return self.sigma_i**2 * self.gamma / self.sigma**2


def identical_users_scenario(geometry: PortGeometry, n_interferers: int,
                             gamma: float, sigma: float = 1.0) -> FamaScenario:
    """Statistically identical users: sigma_I^2 = N_I sigma^2."""
    return FamaScenario(geometry, sigma, sqrt(n_interferers) * sigma,
                        n_interferers, gamma)


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of desired and interference gains over all ports."""

    desired: np.ndarray
    interference: np.ndarray

    def __post_init__(self):
        if self.desired.shape != self.interference.shape:
            raise ValueError("desired/interference must have equal length")


class DrawStream:
    """Seedable stream of trial indices; one index per sampled draw."""

    def __init__(self, seed: int, start: int = 0):
        self.seed = int(seed)
        self.next_trial = int(start)

    def take(self) -> int:
        t = self.next_trial
        self.next_trial += 1
        return t


def _gains_block(skey, trials, mu_full, scale, block):
    """Vectorized Eq.-style construction for a block id, shape (T, N).

    ``mu_full`` includes the implicit mu_1 = 1 of the reference port.
    """
    trials = np.asarray(trials, dtype=np.uint64)
    n = len(mu_full)
    kx0, ky0 = rng.gauss_pair(rng.cell_key(skey, trials, block, 0))
    root = np.sqrt(np.maximum(0.0, 1.0 - mu_full**2))
    # |mu| == 1 takes the root == 0 branch exactly (no negative rounding)
    re = np.empty((len(trials), n))
    im = np.empty((len(trials), n))
    s = scale / sqrt(2.0)
    re[:, 0] = s * kx0
    im[:, 0] = s * ky0
    for k in range(1, n):
        xk, yk = rng.gauss_pair(rng.cell_key(skey, trials, block, k))
        re[:, k] = s * (root[k] * xk + mu_full[k] * kx0)
        im[:, k] = s * (root[k] * yk + mu_full[k] * ky0)
    return re + 1j * im


def _mu_full(geometry: PortGeometry) -> np.ndarray:
    return np.concatenate([[1.0], geometry.mu])


def sample_draw(scenario: FamaScenario, stream: DrawStream) -> ChannelDraw:
    """Draw one correlated realization of desired + interference gains."""
    t = stream.take()
    mu_full = _mu_full(scenario.geometry)
    skey = rng.seed_key(stream.seed)
    des = _gains_block(skey, [t], mu_full, scenario.sigma, rng.DESIRED_BLOCK)[0]
    intf = _gains_block(skey, [t], mu_full, scenario.sigma_i, rng.INTERF_BLOCK)[0]
    return ChannelDraw(des, intf)


def sample_draws(scenario: FamaScenario, seed: int, start: int,
                 count: int) -> tuple[np.ndarray, np.ndarray]:
    """Batch form of sample_draw: two (count, N) complex arrays."""
    trials = np.arange(start, start + count, dtype=np.uint64)
    mu_full = _mu_full(scenario.geometry)
    skey = rng.seed_key(seed)
    des = _gains_block(skey, trials, mu_full, scenario.sigma, rng.DESIRED_BLOCK)
    intf = _gains_block(skey, trials, mu_full, scenario.sigma_i, rng.INTERF_BLOCK)
    return des, intf


def sample_per_interferer(scenario: FamaScenario, symbols,
                          stream: DrawStream) -> np.ndarray:
    """Aggregate interference as an explicit sum over N_I interferers.

    Each interferer contributes an independent correlated draw with
    per-interferer power sigma_I^2 / N_I, weighted by its (unit-magnitude)
    data symbol.  Distributionally this equals the single aggregate draw.
    """
    symbols = np.asarray(symbols, dtype=complex)
    if scenario.n_interferers >= 1 and len(symbols) == 0:
        raise ValueError("symbols must hold one entry per interferer")
    if len(symbols) != scenario.n_interferers:
        raise ValueError(
            f"expected {scenario.n_interferers} symbols, got {len(symbols)}")
    t = stream.take()
    mu_full = _mu_full(scenario.geometry)
    skey = rng.seed_key(stream.seed)
    per_sigma = scenario.sigma_i / sqrt(scenario.n_interferers)
    total = np.zeros(scenario.geometry.n_ports, dtype=complex)
    for i, s_i in enumerate(symbols):
        g = _gains_block(skey, [t], mu_full, per_sigma, rng.INTERF_BLOCK + i)[0]
        total += g * s_i
    return total
