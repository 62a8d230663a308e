"""Numba-jitted kernel backend.

Same stream definitions as backend_numpy (see rng module docstring); the
loops here fuse word mixing with acceptance bookkeeping. All arithmetic up to
the shared log/sqrt finishing step is exact, so outputs are bit-identical to
the numpy backend.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from . import rng

_GOLDEN = np.uint64(rng.GOLDEN)
_M1 = np.uint64(rng.MIX_M1)
_M2 = np.uint64(rng.MIX_M2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_S63 = np.uint64(63)
_ONE = np.uint64(1)
_U53 = rng.U53


@njit(cache=True)
def _word(seed: np.uint64, counter: np.uint64) -> np.uint64:
    z = seed + (counter + _ONE) * _GOLDEN
    z ^= z >> _S30
    z *= _M1
    z ^= z >> _S27
    z *= _M2
    z ^= z >> _S31
    return z


@njit(cache=True)
def _uniforms(seed: np.uint64, start: np.uint64, count: int) -> np.ndarray:
    out = np.empty(count)
    for i in range(count):
        out[i] = (_word(seed, start + np.uint64(i)) >> _S11) * _U53
    return out


@njit(cache=True)
def _rademacher(seed: np.uint64, count: int) -> np.ndarray:
    out = np.empty(count)
    for i in range(count):
        bit = _word(seed, np.uint64(i)) >> _S63
        out[i] = 1.0 - 2.0 * bit
    return out


@njit(cache=True)
def _accepted_pairs(seed: np.uint64, n_pairs: int):
    v1 = np.empty(n_pairs)
    v2 = np.empty(n_pairs)
    s = np.empty(n_pairs)
    got = 0
    j = np.uint64(0)
    two = np.uint64(2)
    while got < n_pairs:
        c = two * j
        a = 2.0 * ((_word(seed, c) >> _S11) * _U53) - 1.0
        b = 2.0 * ((_word(seed, c + _ONE) >> _S11) * _U53) - 1.0
        ss = a * a + b * b
        if 0.0 < ss < 1.0:
            v1[got] = a
            v2[got] = b
            s[got] = ss
            got += 1
        j += _ONE
    return v1, v2, s


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    return _uniforms(np.uint64(seed & rng._MASK), np.uint64(start), count)


def rademacher(seed: int, count: int) -> np.ndarray:
    return _rademacher(np.uint64(seed & rng._MASK), count)


def accepted_pairs(seed: int, n_pairs: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return _accepted_pairs(np.uint64(seed & rng._MASK), n_pairs)


def gaussian(seed: int, n: int) -> np.ndarray:
    if n == 0:
        return np.empty(0)
    v1, v2, s = accepted_pairs(seed, (n + 1) // 2)
    return rng._finish_pairs(v1, v2, s, n)
