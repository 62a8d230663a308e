"""Kernel backends for bulk random generation.

The active backend is chosen once at import time from the ERASURELAB_BACKEND
environment variable: "numba" (default when importable) or "numpy". Both
produce bit-identical streams; numba is simply faster on large draws.
"""

from __future__ import annotations

import os

from ..errors import DomainError
from . import rng
from .rng import subseed, subset_indices, uniform

__all__ = [
    "backend_name",
    "gaussian",
    "rademacher",
    "uniforms",
    "rng",
    "subseed",
    "subset_indices",
    "uniform",
]


def _load():
    requested = os.environ.get("ERASURELAB_BACKEND", "").strip().lower()
    if requested not in ("", "numba", "numpy"):
        raise DomainError(
            f"ERASURELAB_BACKEND must be 'numba' or 'numpy', got {requested!r}"
        )
    if requested in ("", "numba"):
        try:
            from . import backend_numba

            return "numba", backend_numba
        except ImportError:
            if requested == "numba":
                raise
    from . import backend_numpy

    return "numpy", backend_numpy


_NAME, _IMPL = _load()


def backend_name() -> str:
    return _NAME


def gaussian(seed: int, n: int):
    """n standard normals for this seed (counter-based, order-stable)."""
    return _IMPL.gaussian(seed, n)


def rademacher(seed: int, n: int):
    """n independent +-1.0 entries for this seed."""
    return _IMPL.rademacher(seed, n)


def uniforms(seed: int, start: int, count: int):
    """Uniforms in [0,1) at counters [start, start+count)."""
    return _IMPL.uniforms(seed, start, count)
