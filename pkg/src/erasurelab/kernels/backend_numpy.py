"""Pure-numpy kernel backend (vectorized, no JIT)."""

from __future__ import annotations

import numpy as np

from . import rng


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    return rng.uniforms_np(seed, start, count)


def rademacher(seed: int, count: int) -> np.ndarray:
    """count entries of +-1.0 from the sign bits of counters 0..count-1."""
    bits = rng.words_np(seed, 0, count) >> np.uint64(63)
    return 1.0 - 2.0 * bits.astype(np.float64)


def accepted_pairs(seed: int, n_pairs: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """First n_pairs accepted polar candidates, scanned in counter order.

    Candidates are consumed in blocks, but acceptance depends only on the
    candidate index, so the result is identical to a sequential scan.
    """
    got_v1: list[np.ndarray] = []
    got_v2: list[np.ndarray] = []
    got_s: list[np.ndarray] = []
    need = n_pairs
    j0 = 0
    while need > 0:
        block = max(int(need / 0.7) + 16, 1024)
        u = rng.uniforms_np(seed, 2 * j0, 2 * block)
        v1 = 2.0 * u[0::2] - 1.0
        v2 = 2.0 * u[1::2] - 1.0
        s = v1 * v1 + v2 * v2
        idx = np.flatnonzero((s > 0.0) & (s < 1.0))[:need]
        got_v1.append(v1[idx])
        got_v2.append(v2[idx])
        got_s.append(s[idx])
        need -= len(idx)
        j0 += block
    return np.concatenate(got_v1), np.concatenate(got_v2), np.concatenate(got_s)


def gaussian(seed: int, n: int) -> np.ndarray:
    """n standard normals via the polar method (counters 2j, 2j+1)."""
    if n == 0:
        return np.empty(0)
    v1, v2, s = accepted_pairs(seed, (n + 1) // 2)
    return rng._finish_pairs(v1, v2, s, n)
