# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: Monte Carlo trial blocks and the quadrature
integrand products.  Mirrors ``_kernels_py`` exactly -- the integer RNG
stream is bit-identical, floating results agree to ULP-level."""

from libc.math cimport INFINITY, M_PI, exp, fabs, floor, lgamma, log, sqrt
from libc.stdint cimport uint64_t

cdef extern from "math.h" nogil:
    void sincos(double x, double *sin_out, double *cos_out)
from libc.stdlib cimport free, malloc

import numpy as np

BACKEND_NAME = "compiled"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15UL
cdef double U53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t x) nogil:
    x ^= x >> 30
    x *= 0xBF58476D1CE4E5B9UL
    x ^= x >> 27
    x *= 0x94D049BB133111EBUL
    x ^= x >> 31
    return x


cdef inline uint64_t cell_key(uint64_t skey, uint64_t trial, uint64_t block,
                              uint64_t port) nogil:
    cdef uint64_t t = mix64(skey + trial * GOLDEN)
    cdef uint64_t slot = (block << 32) + port
    return mix64(t + mix64(slot + GOLDEN))


cdef inline void gauss_pair(uint64_t key, double *gx, double *gy) nogil:
    cdef uint64_t r1 = mix64(key + GOLDEN)
    cdef uint64_t r2 = mix64(key + GOLDEN + GOLDEN)
    cdef double u1 = <double> ((r1 >> 11) + 1) * U53
    cdef double u2 = <double> ((r2 >> 11) + 1) * U53
    cdef double r = sqrt(-2.0 * log(u1))
    cdef double s, c
    sincos(2.0 * M_PI * u2, &s, &c)
    gx[0] = r * c
    gy[0] = r * s


def mix64_py(x):
    """Expose the C mixer so tests can check stream identity with rng.py."""
    return int(mix64(<uint64_t> (int(x) & 0xFFFFFFFFFFFFFFFF)))


# ----------------------------------------------------------------------
# Marcum Q1 (same Poisson-mixture scheme as specfun.marcum_q1)
# ----------------------------------------------------------------------

cdef double gammq(double s, double x) nogil:
    cdef double ap, delt, total, tiny, b, c, d, h, an
    cdef int i
    if x <= 0.0:
        return 1.0
    if x < s + 1.0:
        ap = s
        delt = 1.0 / s
        total = delt
        while fabs(delt) > fabs(total) * 1e-17:
            ap += 1.0
            delt *= x / ap
            total += delt
        return 1.0 - total * exp(-x + s * log(x) - lgamma(s))
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if fabs(d) < tiny:
            d = tiny
        c = b + an / c
        if fabs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delt = d * c
        h *= delt
        if fabs(delt - 1.0) < 1e-15:
            break
    return exp(-x + s * log(x) - lgamma(s)) * h


cdef double marcum_q1_c(double a, double b) nogil:
    cdef double alpha = 0.5 * a * a
    cdef double beta = 0.5 * b * b
    cdef double p_mode, g_mode, tau_mode, acc, mass
    cdef double pu, gu, tu, pd, gd, td
    cdef long n0, nu, nd, it
    if beta == 0.0:
        return 1.0
    if alpha == 0.0:
        return exp(-beta)
    n0 = <long> floor(alpha)
    p_mode = exp(-alpha + n0 * log(alpha) - lgamma(n0 + 1.0))
    g_mode = gammq(n0 + 1.0, beta)
    tau_mode = exp(-beta + n0 * log(beta) - lgamma(n0 + 1.0))
    acc = p_mode * g_mode
    mass = p_mode
    pu = p_mode; gu = g_mode; tu = tau_mode; nu = n0
    it = 0
    while mass < 1.0 - 1e-16 and it < 100000:
        it += 1
        tu *= beta / (nu + 1)
        gu = gu + tu
        if gu > 1.0:
            gu = 1.0
        pu *= alpha / (nu + 1)
        nu += 1
        acc += pu * gu
        mass += pu
        if pu == 0.0:
            break
    pd = p_mode; gd = g_mode; td = tau_mode; nd = n0
    it = 0
    while nd >= 1 and mass < 1.0 - 1e-16 and it < 100000:
        it += 1
        gd = gd - td
        if gd < 0.0:
            gd = 0.0
        td *= nd / beta
        pd *= nd / alpha
        nd -= 1
        acc += pd * gd
        mass += pd
        if pd == 0.0:
            break
    if acc > 1.0:
        acc = 1.0
    return acc


def marcum_q1_grid(a, b):
    """Elementwise Marcum Q1 over broadcast arrays."""
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=np.float64),
                                       np.asarray(b, dtype=np.float64))
    a_c = np.ascontiguousarray(a_arr).ravel()
    b_c = np.ascontiguousarray(b_arr).ravel()
    out = np.empty_like(a_c)
    cdef double[::1] av = a_c
    cdef double[::1] bv = b_c
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = av.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = marcum_q1_c(av[i], bv[i])
    return out.reshape(a_arr.shape)


# ----------------------------------------------------------------------
# Quadrature integrands
# ----------------------------------------------------------------------

def exact_product_grid(double[::1] u, double[::1] t, double q, double[::1] c,
                       double[::1] s2th, double[::1] wth):
    """Product over ports of the Theorem-1 bracket at paired (u, t) points,
    u = q z; I0 enters only through the non-positive-exponent theta rule."""
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t nc = c.shape[0]
    cdef Py_ssize_t nth = s2th.shape[0]
    out = np.ones(n)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j, m
    cdef double su, st, prod, ck, big_a, alpha, e1, g, base, qfrac
    qfrac = q / (q + 1.0)
    with nogil:
        for i in range(n):
            su = sqrt(u[i])
            st = sqrt(t[i])
            prod = 1.0
            for j in range(nc):
                ck = c[j]
                big_a = ck / (q + 1.0)
                alpha = sqrt(2.0 * ck / (q + 1.0))
                e1 = exp(-big_a * (su - st) * (su - st))
                base = 4.0 * big_a * su * st
                g = 0.0
                for m in range(nth):
                    g += wth[m] * exp(-base * s2th[m])
                prod *= 1.0 + qfrac * e1 * g - marcum_q1_c(alpha * st, alpha * su)
            ov[i] = prod
    return out


def ub_product_grid(z, double q, double[::1] c):
    """Product over ports of the Theorem-2 integrand factor."""
    z_c = np.ascontiguousarray(np.asarray(z, dtype=np.float64)).ravel()
    out = np.ones_like(z_c)
    cdef double[::1] zv = z_c
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j, n = zv.shape[0], nc = c.shape[0]
    cdef double a, prod
    with nogil:
        for i in range(n):
            prod = 1.0
            for j in range(nc):
                a = q * c[j] / (q + 1.0)
                prod *= 1.0 - exp(-a * zv[i]) / ((q + 1.0) * (1.0 + 4.0 * a * zv[i]))
            ov[i] = prod
    return out.reshape(np.asarray(z).shape)


# ----------------------------------------------------------------------
# Monte Carlo trial block
# ----------------------------------------------------------------------

def mc_outage_block(seed, trial_start, n_trials, double sigma, double sigma_i,
                    double gamma, double[::1] mu, int n_split):
    """Simulate trials [trial_start, trial_start + n_trials); see the
    fallback docstring.  Returns (outage_count, zero_interference_count)."""
    cdef uint64_t skey = mix64(<uint64_t> (int(seed) & 0xFFFFFFFFFFFFFFFF) + GOLDEN)
    cdef uint64_t t0 = <uint64_t> int(trial_start)
    cdef Py_ssize_t nt = int(n_trials)
    cdef Py_ssize_t nports = mu.shape[0] + 1
    cdef int nblocks = 1 if n_split == 0 else n_split
    cdef double sd = sigma / sqrt(2.0)
    cdef double si = (sigma_i if n_split == 0 else sigma_i / sqrt(<double> n_split)) / sqrt(2.0)

    cdef double *irefx = <double *> malloc(nblocks * sizeof(double))
    cdef double *irefy = <double *> malloc(nblocks * sizeof(double))
    if irefx == NULL or irefy == NULL:
        free(irefx); free(irefy)
        raise MemoryError()

    cdef double *mu_full = <double *> malloc(nports * sizeof(double))
    cdef double *root = <double *> malloc(nports * sizeof(double))
    if mu_full == NULL or root == NULL:
        free(irefx); free(irefy); free(mu_full); free(root)
        raise MemoryError()
    mu_full[0] = 1.0
    root[0] = 0.0
    cdef Py_ssize_t k
    for k in range(1, nports):
        mu_full[k] = mu[k - 1]
        root[k] = sqrt(1.0 - mu_full[k] * mu_full[k]) if fabs(mu_full[k]) < 1.0 else 0.0

    cdef Py_ssize_t i
    cdef int b
    cdef long n_out = 0, n_inf = 0
    cdef uint64_t trial
    cdef double dx0, dy0, xk, yk, dre, dim, d2, ire, iim, i2, ratio, best
    with nogil:
        for i in range(nt):
            trial = t0 + <uint64_t> i
            gauss_pair(cell_key(skey, trial, 0, 0), &dx0, &dy0)
            for b in range(nblocks):
                gauss_pair(cell_key(skey, trial, 1 + b, 0), &irefx[b], &irefy[b])
            best = 0.0
            for k in range(nports):
                if k == 0:
                    dre = sd * dx0
                    dim = sd * dy0
                else:
                    gauss_pair(cell_key(skey, trial, 0, <uint64_t> k), &xk, &yk)
                    dre = sd * (root[k] * xk + mu_full[k] * dx0)
                    dim = sd * (root[k] * yk + mu_full[k] * dy0)
                d2 = dre * dre + dim * dim
                ire = 0.0
                iim = 0.0
                for b in range(nblocks):
                    if k == 0:
                        ire += si * irefx[b]
                        iim += si * irefy[b]
                    else:
                        gauss_pair(cell_key(skey, trial, 1 + b, <uint64_t> k), &xk, &yk)
                        ire += si * (root[k] * xk + mu_full[k] * irefx[b])
                        iim += si * (root[k] * yk + mu_full[k] * irefy[b])
                i2 = ire * ire + iim * iim
                if i2 == 0.0:
                    n_inf += 1
                    ratio = INFINITY if d2 > 0.0 else 0.0
                else:
                    ratio = d2 / i2
                if ratio > best:
                    best = ratio
            if best <= gamma:
                n_out += 1
    free(irefx); free(irefy); free(mu_full); free(root)
    return int(n_out), int(n_inf)
