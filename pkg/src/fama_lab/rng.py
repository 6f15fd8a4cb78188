"""Counter-based, splittable random stream for reproducible Monte Carlo.

Every Gaussian pair is addressed by (seed, trial, block, port):

* ``block`` 0 is the desired channel, block 1 the aggregate interference
  (or interferer #1 in per-interferer mode, block 1 + i for interferer i);
* ``port`` 0 is the shared reference variate pair (x0, y0), port k >= 1
  the independent pair of the (k+1)-th antenna port.

Keys are derived by iterated SplitMix64 hashing, so any (trial, block,
port) cell can be generated independently of all others: serial loops,
sharded loops and runs with extra ports appended all reproduce the same
values for the cells they share.  Gaussians come from the trigonometric
Box-Muller transform (two uniforms -> two normals, no rejection state).

The Cython kernel re-implements ``_mix64`` bit-for-bit in C; the tests
check both lanes produce identical integer streams.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / 9007199254740992.0  # 2^-53

DESIRED_BLOCK = 0
INTERF_BLOCK = 1


def mix64(x):
    """SplitMix64 finalizer on uint64 scalars or arrays."""
    x = np.uint64(x) if np.isscalar(x) else x.astype(np.uint64, copy=True)
    with np.errstate(over="ignore"):
        x ^= x >> np.uint64(30)
        x *= _M1
        x ^= x >> np.uint64(27)
        x *= _M2
        x ^= x >> np.uint64(31)
    return x


def seed_key(seed: int):
    return mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + GOLDEN)


def cell_key(skey, trial, block: int, port):
    """Key of one Gaussian-pair cell; ``trial``/``port`` may be arrays."""
    with np.errstate(over="ignore"):
        t = mix64(skey + np.uint64(trial) * GOLDEN if np.isscalar(trial)
                  else skey + trial.astype(np.uint64) * GOLDEN)
        slot = (np.uint64(block) << np.uint64(32)) + (
            np.uint64(port) if np.isscalar(port) else port.astype(np.uint64))
        return mix64(t + mix64(slot + GOLDEN))


def _unit_open(raw):
    """uint64 -> double in (0, 1]; safe for log()."""
    return ((raw >> np.uint64(11)) + np.uint64(1)) * _U53


def gauss_pair(key):
    """Two standard normals from cell key(s), Box-Muller."""
    with np.errstate(over="ignore"):
        u1 = _unit_open(mix64(key + GOLDEN))
        u2 = _unit_open(mix64(key + GOLDEN + GOLDEN))
    r = np.sqrt(-2.0 * np.log(u1))
    ang = (2.0 * np.pi) * u2
    return r * np.cos(ang), r * np.sin(ang)
