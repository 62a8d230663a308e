"""Random matrix generation, row erasure, and extreme singular values.

Matrices are sampled from a counter-based RNG (see kernels.rng), so a
(distribution, rows, cols, seed) tuple always reproduces the same entries,
in row-major order, regardless of platform thread count. Rows are the
erasure-bearing dimension everywhere: erasing takes row indices, and the
singular-value routines expect tall (rows >= cols) inputs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Union

import numpy as np

from . import kernels
from .errors import ComputationError, DomainError

_DISTRIBUTIONS = ("gaussian", "rademacher")
#: generate() refuses matrices above this entry count (~1 GiB of float64).
MAX_ENTRIES = 1 << 27


@dataclass(frozen=True, eq=False)
class MatrixSample:
    """A sampled dense matrix plus the recipe that produced it.

    `entries` has shape (rows, cols) and is marked read-only; derived
    samples (after row erasure) keep the parent's distribution and seed as
    provenance.
    """

    rows: int
    cols: int
    distribution: str
    seed: int
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (self.rows, self.cols):
            raise DomainError(
                f"MatrixSample: entries shape {self.entries.shape} does not match "
                f"({self.rows}, {self.cols})"
            )


@dataclass(frozen=True)
class SingularExtremes:
    """Largest and smallest singular values with their ratio.

    s_min is the cols-th singular value (full column-spectrum convention),
    and cond = s_max / s_min, +inf when s_min is exactly zero.
    """

    s_min: float
    s_max: float
    cond: float


@dataclass(frozen=True)
class ErasureSet:
    """Surviving row indices of an erasure pattern on `rows` rows."""

    rows: int
    kept: tuple[int, ...]

    def __post_init__(self):
        prev = -1
        for i in self.kept:
            if not prev < i < self.rows:
                raise DomainError(
                    f"ErasureSet: kept indices must be strictly increasing in "
                    f"[0, {self.rows}), got {self.kept!r}"
                )
            prev = i

    @property
    def erased(self) -> tuple[int, ...]:
        kept = set(self.kept)
        return tuple(i for i in range(self.rows) if i not in kept)


def generate(distribution: str, rows: int, cols: int, seed: int) -> MatrixSample:
    """Sample a rows x cols matrix with i.i.d. entries, deterministic in seed.

    gaussian: standard normal entries; rademacher: +-1 each with
    probability 1/2. Entries fill row-major from the seed's counter stream.
    """
    if distribution not in _DISTRIBUTIONS:
        raise DomainError(
            f"generate: unknown distribution {distribution!r}; expected one of {_DISTRIBUTIONS}"
        )
    if rows < 1 or cols < 1:
        raise DomainError(f"generate: need rows, cols >= 1, got {rows}x{cols}")
    count = rows * cols
    if count > MAX_ENTRIES:
        raise DomainError(f"generate: {rows}x{cols} exceeds the {MAX_ENTRIES}-entry cap")
    if distribution == "gaussian":
        flat = kernels.gaussian(seed, count)
    else:
        flat = kernels.rademacher(seed, count)
    entries = flat.reshape(rows, cols)
    entries.flags.writeable = False
    return MatrixSample(rows=rows, cols=cols, distribution=distribution, seed=int(seed), entries=entries)


def erase_rows(matrix: MatrixSample, erased: Iterable[int]) -> MatrixSample:
    """Remove the given row indices, keeping survivors in original order."""
    idx = sorted(set(int(i) for i in erased))
    if idx and not (0 <= idx[0] and idx[-1] < matrix.rows):
        raise DomainError(
            f"erase_rows: indices must lie in [0, {matrix.rows}), got {idx[0]}..{idx[-1]}"
        )
    mask = np.ones(matrix.rows, dtype=bool)
    mask[idx] = False
    entries = matrix.entries[mask]
    entries.flags.writeable = False
    return MatrixSample(
        rows=matrix.rows - len(idx),
        cols=matrix.cols,
        distribution=matrix.distribution,
        seed=matrix.seed,
        entries=entries,
    )


def extreme_singular_values(matrix: MatrixSample) -> SingularExtremes:
    """Full-decomposition extreme singular values of a tall matrix."""
    if matrix.rows < matrix.cols:
        raise DomainError(
            f"extreme_singular_values: need rows >= cols, got {matrix.rows}x{matrix.cols}"
        )
    try:
        s = np.linalg.svd(matrix.entries, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(f"extreme_singular_values: SVD did not converge: {exc}") from exc
    s_max = float(s[0])
    s_min = float(s[-1])
    cond = math.inf if s_min == 0.0 else s_max / s_min
    return SingularExtremes(s_min=s_min, s_max=s_max, cond=cond)


def enumerate_erasures(rows: int, erase_count: int, cap: int = 10**6) -> Iterator[ErasureSet]:
    """All erasure patterns of the given size, lexicographic in erased indices.

    Refuses to start when C(rows, erase_count) exceeds `cap`.
    """
    if not 0 <= erase_count <= rows:
        raise DomainError(
            f"enumerate_erasures: need 0 <= erase_count <= rows, got {erase_count} of {rows}"
        )
    total = math.comb(rows, erase_count)
    if total > cap:
        raise DomainError(
            f"enumerate_erasures: C({rows},{erase_count}) = {total} exceeds the cap {cap}"
        )

    def walk() -> Iterator[ErasureSet]:
        universe = range(rows)
        for erased in itertools.combinations(universe, erase_count):
            gone = set(erased)
            yield ErasureSet(rows=rows, kept=tuple(i for i in universe if i not in gone))

    return walk()


def sample_sparse_unit_vector(dim: int, sparsity: int, seed: int) -> np.ndarray:
    """Unit vector with exactly `sparsity` nonzeros on a uniform support.

    Support is a uniform subset of the coordinates; values on the support
    are a normalized Gaussian, i.e. uniform on the support sphere.
    """
    if not 1 <= sparsity <= dim:
        raise DomainError(
            f"sample_sparse_unit_vector: need 1 <= sparsity <= dim, got s={sparsity}, dim={dim}"
        )
    support = kernels.subset_indices(kernels.subseed(seed, 0), dim, sparsity)
    for attempt in range(1, 8):
        values = kernels.gaussian(kernels.subseed(seed, attempt), sparsity)
        norm = float(np.linalg.norm(values))
        if norm > 1e-150:
            out = np.zeros(dim)
            out[support] = values / norm
            return out
    raise ComputationError("sample_sparse_unit_vector: degenerate Gaussian draw")


def write_matrix(matrix: MatrixSample, path: Union[str, Path]) -> None:
    """Textual dump: header `rows cols distribution seed`, then entry rows.

    Entries are written with repr so read_matrix round-trips exactly.
    """
    with open(path, "w") as fh:
        fh.write(f"{matrix.rows} {matrix.cols} {matrix.distribution} {matrix.seed}\n")
        for row in matrix.entries:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def read_matrix(path: Union[str, Path]) -> MatrixSample:
    """Parse a write_matrix dump back into a MatrixSample."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4:
            raise DomainError(f"read_matrix: malformed header in {path}")
        rows, cols = int(header[0]), int(header[1])
        distribution, seed = header[2], int(header[3])
        if distribution not in _DISTRIBUTIONS:
            raise DomainError(f"read_matrix: unknown distribution {distribution!r} in {path}")
        entries = np.empty((rows, cols))
        for i in range(rows):
            parts = fh.readline().split()
            if len(parts) != cols:
                raise DomainError(f"read_matrix: row {i} has {len(parts)} values, expected {cols}")
            entries[i] = [float(p) for p in parts]
    entries.flags.writeable = False
    return MatrixSample(rows=rows, cols=cols, distribution=distribution, seed=seed, entries=entries)
