"""Counter-based random number generation.

Every random object in this package is a pure function of a 64-bit seed and a
counter, so trials can run in any order, on any worker count, on either
backend, and still produce identical bytes. The generator is splitmix64 used
in counter mode:

    word(seed, i) = mix64((seed + (i + 1) * GOLDEN) mod 2^64)

where mix64 is the splitmix64 finalizer (xor-shift 30, multiply M1, xor-shift
27, multiply M2, xor-shift 31) and GOLDEN = 0x9E3779B97F4A7C15. Derived
quantities are defined exactly as:

* uniform(seed, i)    = (word(seed, i) >> 11) * 2^-53, a float64 in [0, 1)
* sign(seed, i)       = +1.0 if the top bit of word(seed, i) is 0 else -1.0
* subseed(seed, k)    = word(seed, k), used to split independent streams
* standard normals    : candidate pair j reads uniforms at counters 2j and
  2j+1, maps them to v = 2u - 1, and is accepted iff 0 < v1^2 + v2^2 < 1;
  accepted candidates, in increasing j, yield the pairs
  (v1 * f, v2 * f) with f = sqrt(-2 ln(s) / s)  (Marsaglia's polar method).

Everything above the log/sqrt finishing step is exact integer and float
arithmetic, so the numba and numpy backends agree bit for bit; the finishing
step itself runs through the same numpy code for both (see _finish_pairs).

Per-trial streams are split as subseed(master_seed, trial_index), and within a
trial the independent purposes (matrix entries, erasure choice, test vectors)
use subseed(trial_seed, 0), subseed(trial_seed, 1), ... so no purpose ever
shares counters with another.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX_M1 = 0xBF58476D1CE4E5B9
MIX_M2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1

U53 = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 finalizer on a python int, reduced mod 2^64."""
    z &= _MASK
    z ^= z >> 30
    z = (z * MIX_M1) & _MASK
    z ^= z >> 27
    z = (z * MIX_M2) & _MASK
    z ^= z >> 31
    return z


def word(seed: int, counter: int) -> int:
    """The counter-mode output word, as a python int."""
    return mix64(seed + (counter + 1) * GOLDEN)


def subseed(seed: int, k: int) -> int:
    """Seed for an independent child stream (trial k, or purpose k)."""
    return word(seed, k)


def uniform(seed: int, counter: int) -> float:
    """Scalar uniform in [0, 1); reference for the vector kernels."""
    return (word(seed, counter) >> 11) * U53


def words_np(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized counter words [start, start+count) as uint64.

    This is the shared numpy reference used by seed splitting and subset
    sampling; the backends reimplement the same arithmetic for their bulk
    paths and are tested to match it exactly.
    """
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK) + idx * np.uint64(GOLDEN)
    z ^= z >> np.uint64(30)
    z *= np.uint64(MIX_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(MIX_M2)
    z ^= z >> np.uint64(31)
    return z


def uniforms_np(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized uniforms in [0, 1) for counters [start, start+count)."""
    return (words_np(seed, start, count) >> np.uint64(11)) * U53


def _finish_pairs(v1: np.ndarray, v2: np.ndarray, s: np.ndarray, n: int) -> np.ndarray:
    """Turn accepted polar candidates into n standard normals.

    Shared by both backends so the only transcendental step (log, sqrt) is
    computed by one code path.
    """
    f = np.sqrt(-2.0 * np.log(s) / s)
    out = np.empty(2 * len(s))
    out[0::2] = v1 * f
    out[1::2] = v2 * f
    return out[:n]


def subset_indices(seed: int, n: int, k: int) -> np.ndarray:
    """k distinct indices drawn uniformly from range(n), sorted ascending.

    Partial Fisher-Yates shuffle driven by uniforms at counters 0..k-1 of
    `seed`; pure integer/float arithmetic on the shared uniform stream, so it
    is backend-independent by construction.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if k == 0:
        return np.empty(0, dtype=np.intp)
    u = uniforms_np(seed, 0, k)
    pool = np.arange(n, dtype=np.intp)
    for i in range(k):
        j = i + int(u[i] * (n - i))
        pool[i], pool[j] = pool[j], pool[i]
    out = pool[:k]
    out.sort()
    return out
