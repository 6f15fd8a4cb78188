"""Self-contained special functions for the outage/design formulas.

Everything here is scalar, pure and thread-safe:

* ``bessel_j0`` / ``bessel_j1`` -- Kahan-compensated Taylor series for
  |x| <= 8, Chebyshev-fitted amplitude/phase form beyond (plain truncated
  Hankel series bottoms out near e^{-2x} ~ 1e-7 at x = 8, which is not
  good enough, hence the fitted tables in ``_bessel_tables``).
* ``bessel_i0_scaled`` -- e^{-x} I0(x); never overflows.
* ``marcum_q1`` -- first-order Marcum Q as a Poisson mixture of upper
  incomplete-gamma tails, summed outward from the Poisson mode.  The
  truncation error is bounded by the unaccumulated Poisson mass, which
  gives a proven absolute bound without lookup tables.
* ``expint_en`` / ``expint_en_scaled`` -- generalized exponential integral
  E_n, series for small x and a modified-Lentz continued fraction for
  large x; no forward recurrence anywhere.
* ``j0_envelope_table`` / ``j0_envelope_inverse`` -- the monotone envelope
  of |J0| (successive local maxima) and its inverse: the smallest rho*
  with |J0(rho)| <= mu* for every rho >= rho*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ._bessel_tables import P0_CHEB, P1_CHEB, Q0_CHEB, Q1_CHEB, XSPLIT
from .errors import DomainError, ResolutionExceededError

_EULER_GAMMA = 0.5772156649015328606
_EPS = 2.220446049250313e-16
_ENVELOPE_CAP = 500.0


def _check_finite(name, x):
    if not math.isfinite(x):
        raise DomainError(f"{name} requires a finite argument, got {x!r}")


# ----------------------------------------------------------------------
# Bessel J0 / J1
# ----------------------------------------------------------------------

def _j0_series(x):
    """Taylor series with Kahan compensation, reliable for |x| <~ 9."""
    u = 0.25 * x * x
    term = 1.0
    total = 1.0
    comp = 0.0
    m = 0
    while abs(term) > 1e-19 * (1.0 + abs(total)) or m < 4:
        m += 1
        term *= -u / (m * m)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if m > 60:  # pragma: no cover - series always terminates before this
            break
    return total


def _j1_series(x):
    u = 0.25 * x * x
    term = 0.5 * x
    total = term
    comp = 0.0
    m = 0
    while abs(term) > 1e-19 * (1.0 + abs(total)) or m < 4:
        m += 1
        term *= -u / (m * (m + 1))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if m > 60:  # pragma: no cover
            break
    return total


def _clenshaw(coeffs, s):
    b1 = 0.0
    b2 = 0.0
    for c in coeffs[:0:-1]:
        b1, b2 = 2.0 * s * b1 - b2 + c, b1
    return s * b1 - b2 + coeffs[0]


def _j_asymptotic(nu, x):
    """Amplitude/phase form with Chebyshev-fitted P, Q; valid x >= XSPLIT."""
    w = XSPLIT / x
    s = 2.0 * w * w - 1.0
    if nu == 0:
        p = _clenshaw(P0_CHEB, s)
        q = _clenshaw(Q0_CHEB, s) / (8.0 * x)
        chi = x - 0.25 * math.pi
    else:
        p = _clenshaw(P1_CHEB, s)
        q = _clenshaw(Q1_CHEB, s) / (8.0 * x)
        chi = x - 0.75 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j0(x: float) -> float:
    """Zero-order Bessel function of the first kind."""
    _check_finite("bessel_j0", x)
    ax = abs(x)
    if ax <= 8.0:
        return _j0_series(ax)
    return _j_asymptotic(0, ax)


def bessel_j1(x: float) -> float:
    """First-order Bessel function; used by the envelope builder (Newton)."""
    _check_finite("bessel_j1", x)
    ax = abs(x)
    val = _j1_series(ax) if ax <= 8.0 else _j_asymptotic(1, ax)
    return -val if x < 0.0 else val


# ----------------------------------------------------------------------
# Modified Bessel I0 (scaled)
# ----------------------------------------------------------------------

def bessel_i0_scaled(x: float) -> float:
    """e^{-x} I0(x) for x >= 0.  All-positive series below 18, Hankel
    asymptotic series at optimal truncation beyond (min term ~ e^{-2x})."""
    _check_finite("bessel_i0_scaled", x)
    if x < 0.0:
        raise DomainError(f"bessel_i0_scaled requires x >= 0, got {x!r}")
    if x <= 18.0:
        u = 0.25 * x * x
        term = 1.0
        total = 1.0
        m = 0
        while term > 1e-18 * total:
            m += 1
            term *= u / (m * m)
            total += term
        return math.exp(-x) * total
    # I0(x) ~ e^x/sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        nxt = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if nxt >= term or nxt < 1e-18 * total:
            if nxt < term:
                total += nxt
            break
        term = nxt
        total += term
    return total / math.sqrt(2.0 * math.pi * x)


def bessel_i0(x: float) -> float:
    """Unscaled I0; overflows for x >~ 713 like e^x does."""
    return math.exp(x) * bessel_i0_scaled(x)


# ----------------------------------------------------------------------
# Regularized upper incomplete gamma (integer shape helper for Marcum Q)
# ----------------------------------------------------------------------

def _gammq(s: float, x: float) -> float:
    """Q(s, x) = Gamma(s, x)/Gamma(s) for s >= 1, x >= 0 (NR-style)."""
    if x <= 0.0:
        return 1.0
    if x < s + 1.0:
        # lower series
        ap = s
        delt = 1.0 / s
        total = delt
        while abs(delt) > abs(total) * 1e-17:
            ap += 1.0
            delt *= x / ap
            total += delt
        return 1.0 - total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    # continued fraction, modified Lentz
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delt = d * c
        h *= delt
        if abs(delt - 1.0) < 1e-15:
            break
    return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h


# ----------------------------------------------------------------------
# Marcum Q1
# ----------------------------------------------------------------------

def marcum_q1(a: float, b: float) -> float:
    """First-order Marcum Q function, absolute error well under 1e-10.

    Q1(a, b) = sum_n pois(n; a^2/2) * Q(n + 1, b^2/2) summed outward from
    the Poisson mode; the neglected tail is bounded by the unaccumulated
    Poisson mass since every gamma tail lies in [0, 1].
    """
    _check_finite("marcum_q1", a)
    _check_finite("marcum_q1", b)
    if a < 0.0 or b < 0.0:
        raise DomainError(f"marcum_q1 requires a, b >= 0, got ({a!r}, {b!r})")
    alpha = 0.5 * a * a
    beta = 0.5 * b * b
    if beta == 0.0:
        return 1.0
    if alpha == 0.0:
        return math.exp(-beta)

    n0 = int(alpha)
    lp = -alpha + n0 * math.log(alpha) - math.lgamma(n0 + 1)
    p_mode = math.exp(lp)
    g_mode = _gammq(n0 + 1.0, beta)
    # increment tau(n) = e^{-beta} beta^n / n!; G_{n+1} = G_n + tau(n+1)
    ltau = -beta + n0 * math.log(beta) - math.lgamma(n0 + 1)
    tau_mode = math.exp(ltau)

    acc = p_mode * g_mode
    mass = p_mode

    # upward from the mode; the 10^5 cap covers alpha, beta up to ~10^8
    pu, gu, tu, nu = p_mode, g_mode, tau_mode, n0
    for _ in range(100_000):
        if mass >= 1.0 - 1e-16:
            break
        tu *= beta / (nu + 1)
        gu = min(gu + tu, 1.0)
        pu *= alpha / (nu + 1)
        nu += 1
        acc += pu * gu
        mass += pu
        if pu == 0.0:
            break
    # downward from the mode
    pd, gd, td, nd = p_mode, g_mode, tau_mode, n0
    for _ in range(100_000):
        if nd < 1 or mass >= 1.0 - 1e-16:
            break
        gd = max(gd - td, 0.0)
        td *= nd / beta
        pd *= nd / alpha
        nd -= 1
        acc += pd * gd
        mass += pd
        if pd == 0.0:
            break
    return min(acc, 1.0)


# ----------------------------------------------------------------------
# Generalized exponential integral E_n
# ----------------------------------------------------------------------

def _en_series(n: int, x: float) -> float:
    """A&S 5.1.12 series, for 0 < x <= 1.5 and n >= 1."""
    if n == 1:
        psi = -_EULER_GAMMA
    else:
        psi = -_EULER_GAMMA + math.fsum(1.0 / j for j in range(1, n))
    # (-x)^{n-1}/(n-1)! * (psi - ln x)
    lead_mag = math.exp((n - 1) * math.log(x) - math.lgamma(n)) if n > 1 else 1.0
    sign = -1.0 if (n - 1) % 2 else 1.0
    total = sign * lead_mag * (psi - math.log(x))
    term = 1.0  # (-x)^m / m! at m = 0
    for m in range(0, 200):
        if m > 0:
            term *= -x / m
        if m == n - 1:
            continue
        contrib = -term / (m - n + 1.0)
        total += contrib
        if m > n and abs(term) < 1e-18 * max(abs(total), 1e-300) * abs(m - n + 1.0):
            break
    return total


def _en_cf_scaled(n: int, x: float) -> float:
    """Modified Lentz for e^x E_n(x); stable for x > 1.5, any n >= 1."""
    tiny = 1e-300
    b = x + n
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 20000):
        a = -i * (n - 1 + i)
        b += 2.0
        d = a * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + a / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delt = d * c
        h *= delt
        if abs(delt - 1.0) < 1e-15:
            return h
    raise ArithmeticError(f"E_{n}({x}) continued fraction did not converge")


def expint_en(k: int, x: float) -> float:
    """Generalized exponential integral E_k(x), x > 0, integer k >= 0."""
    _check_finite("expint_en", x)
    if x <= 0.0:
        raise DomainError(f"expint_en requires x > 0, got {x!r}")
    if k < 0:
        raise DomainError(f"expint_en requires k >= 0, got {k!r}")
    if k == 0:
        return math.exp(-x) / x
    if x <= 1.5:
        return _en_series(k, x)
    return math.exp(-x) * _en_cf_scaled(k, x)


def expint_en_scaled(k: int, x: float) -> float:
    """e^x E_k(x); avoids underflow of E_k and overflow of the e^x factors
    that multiply it in the closed-form outage bound."""
    _check_finite("expint_en_scaled", x)
    if x <= 0.0:
        raise DomainError(f"expint_en_scaled requires x > 0, got {x!r}")
    if k < 0:
        raise DomainError(f"expint_en_scaled requires k >= 0, got {k!r}")
    if k == 0:
        return 1.0 / x
    if x <= 1.5:
        return math.exp(x) * _en_series(k, x)
    return _en_cf_scaled(k, x)


# ----------------------------------------------------------------------
# |J0| envelope table and inverse
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeTable:
    """Successive local maxima of |J0|: abscissae increasing, peaks
    strictly decreasing, first entry (0, 1).  ``zeros_after[i]`` is the
    J0 zero terminating the descending branch that starts at peak i."""

    abscissae: tuple
    peaks: tuple
    zeros_after: tuple
    cap: float


def _j0_zero(guess: float) -> float:
    """Newton refinement of a J0 zero from a McMahon guess; J0' = -J1."""
    x = guess
    for _ in range(8):
        step = bessel_j0(x) / bessel_j1(x)
        x += step
        if abs(step) < 1e-14 * x:
            break
    return x


_INV_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max_abs_j0(lo: float, hi: float):
    """Golden-section maximum of |J0| on [lo, hi] (one interior peak)."""
    a, b = lo, hi
    c = b - _INV_GOLD * (b - a)
    d = a + _INV_GOLD * (b - a)
    fc, fd = -abs(bessel_j0(c)), -abs(bessel_j0(d))
    while b - a > 1e-12 * max(1.0, b):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLD * (b - a)
            fc = -abs(bessel_j0(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLD * (b - a)
            fd = -abs(bessel_j0(d))
    x = 0.5 * (a + b)
    return x, abs(bessel_j0(x))


@lru_cache(maxsize=1)
def j0_envelope_table(cap: float = _ENVELOPE_CAP) -> EnvelopeTable:
    """Build the envelope once: J0 zeros from McMahon guesses + Newton,
    one golden-section |J0| maximum between consecutive zeros."""
    zeros = []
    s = 1
    while True:
        beta = (s - 0.25) * math.pi
        z = _j0_zero(beta + 1.0 / (8.0 * beta))
        zeros.append(z)
        if z > cap:
            break
        s += 1
    xs = [0.0]
    ps = [1.0]
    z_after = [zeros[0]]
    for lo, hi in zip(zeros[:-1], zeros[1:]):
        x, p = _golden_max_abs_j0(lo, hi)
        if x > cap:
            break
        xs.append(x)
        ps.append(p)
        z_after.append(hi)
    return EnvelopeTable(tuple(xs), tuple(ps), tuple(z_after), xs[-1])


def j0_envelope_inverse(mu_star: float) -> float:
    """Smallest rho* >= 0 with |J0(rho)| <= mu_star for all rho >= rho*."""
    _check_finite("j0_envelope_inverse", mu_star)
    if not 0.0 < mu_star <= 1.0:
        raise DomainError(
            f"j0_envelope_inverse requires mu_star in (0, 1], got {mu_star!r}")
    if mu_star >= 1.0:
        return 0.0
    table = j0_envelope_table()
    if mu_star < table.peaks[-1]:
        raise ResolutionExceededError(
            f"mu_star={mu_star!r} is below the smallest tabulated |J0| peak "
            f"{table.peaks[-1]:.6g}; envelope table cap is {table.cap:.1f}",
            cap=table.cap)
    # last peak strictly above mu_star; bisect right of the peak list
    lo_i, hi_i = 0, len(table.peaks) - 1
    while lo_i < hi_i:
        mid = (lo_i + hi_i + 1) // 2
        if table.peaks[mid] > mu_star:
            lo_i = mid
        else:
            hi_i = mid - 1
    i = lo_i
    # |J0| decreases monotonically from peak i to the next zero
    a, b = table.abscissae[i], table.zeros_after[i]
    for _ in range(200):
        m = 0.5 * (a + b)
        if abs(bessel_j0(m)) > mu_star:
            a = m
        else:
            b = m
        if b - a < 1e-13 * max(1.0, b):
            break
    return 0.5 * (a + b)
