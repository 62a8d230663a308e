"""Scalar special functions and tiny solvers used by the bound modules.

Only what the certificates need: the principal Lambert W branch, log-gamma,
the regularized lower incomplete gamma (and the chi-square CDF it induces),
log binomial coefficients with an entropy upper bound, bisection root finding,
and a log-grid 1-d maximizer for suprema over (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError

_E_INV = math.exp(-1.0)
_BRANCH_SLACK = 1e-12


@dataclass(frozen=True)
class Interval:
    """A nonempty closed interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"interval endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


class MaxResult(NamedTuple):
    argmax: float
    value: float


def lambert_w0(z: float) -> float:
    """Principal branch W0(z) for real z >= -1/e.

    Solves w * exp(w) = z. Seeded by the branch-point series
    w = -1 + p - p^2/3 + 11 p^3/72 with p = sqrt(2 (1 + e z)) near -1/e,
    by w = z for moderate z, and by ln z - ln ln z for large z, then
    polished with Halley steps until the update stalls at machine precision.
    Values up to 1e-12 below -1/e are clamped to the branch point; anything
    lower is a domain error.
    """
    z = float(z)
    if math.isnan(z):
        raise DomainError("lambert_w0: z is NaN")
    if z < -_E_INV:
        if z < -_E_INV - _BRANCH_SLACK:
            raise DomainError(f"lambert_w0: z={z!r} below the branch point -1/e")
        z = -_E_INV
    if z == 0.0:
        return 0.0

    if z < -0.25:
        p = math.sqrt(max(2.0 * (1.0 + math.e * z), 0.0))
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
    elif z <= math.e:
        w = z if z <= 1.0 else math.log(z)
    else:
        l1 = math.log(z)
        w = l1 - math.log(l1)

    prev_dw = math.inf
    for iteration in range(1, 101):
        ew = math.exp(w)
        f = w * ew - z
        if f == 0.0:
            return w
        w1 = w + 1.0
        denom = ew * w1 - (w + 2.0) * f / (2.0 * w1)
        dw = f / denom
        w -= dw
        if w < -1.0:
            # W0 never dips below -1; a Halley overshoot near the branch
            # point is folded back inside the domain.
            w = -1.0 + 0.5 * abs(dw)
        if abs(dw) <= 4e-16 * (1.0 + abs(w)) or dw == -prev_dw:
            # converged, or bouncing between adjacent representable values
            return w
        prev_dw = dw
    raise ConvergenceError(f"lambert_w0: Halley iteration stalled at z={z!r}")


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma: need x > 0, got {x!r}")
    return math.lgamma(x)


def reg_lower_gamma(s: float, z: float) -> float:
    """Regularized lower incomplete gamma P(s, z) = gamma(s, z) / Gamma(s).

    Monotone from 0 at z=0 toward 1 as z grows; equal to the series
    sum_i z^(s+i) e^(-z) / (s (s+1) ... (s+i)) divided by Gamma(s).
    """
    if not s > 0:
        raise DomainError(f"reg_lower_gamma: need s > 0, got {s!r}")
    if z < 0:
        raise DomainError(f"reg_lower_gamma: need z >= 0, got {z!r}")
    return float(_sp.gammainc(s, z))


def chi2_lower_cdf(dof: float, t: float) -> float:
    """P(X <= t) for X chi-square with `dof` degrees of freedom."""
    if not dof > 0:
        raise DomainError(f"chi2_lower_cdf: need dof > 0, got {dof!r}")
    if t < 0:
        raise DomainError(f"chi2_lower_cdf: need t >= 0, got {t!r}")
    return reg_lower_gamma(dof / 2.0, t / 2.0)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) via log-gamma; exact to ~1e-14 relative."""
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"log_binomial: need 0 <= k <= n, got n={n}, k={k}")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_binomial_upper(n: int, k: int) -> float:
    """Entropy upper bound for ln C(n, k): ln(e/sqrt(2 pi)) + n H(k/n).

    H is the natural-log binary entropy. Valid as an upper bound for
    1 <= k <= n-1; at k = 0 or k = n it evaluates below the exact value 0.
    """
    if n <= 0 or k < 0 or k > n:
        raise DomainError(f"log_binomial_upper: need 0 <= k <= n, n >= 1, got n={n}, k={k}")
    g = k / n
    ent = 0.0
    if 0.0 < g < 1.0:
        ent = -g * math.log(g) - (1.0 - g) * math.log(1.0 - g)
    return 1.0 - 0.5 * math.log(2.0 * math.pi) + n * ent


def find_root(
    f: Callable[[float], float],
    bracket: Interval,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> RootResult:
    """Bisection root of f on a bracket with a sign change.

    Stops when the bracket half-width falls below tol (or f hits zero
    exactly); the returned residual is f at the returned midpoint.
    """
    if not tol > 0:
        raise DomainError(f"find_root: need tol > 0, got {tol!r}")
    lo, hi = bracket.lo, bracket.hi
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return RootResult(lo, 0.0, 0)
    if fhi == 0.0:
        return RootResult(hi, 0.0, 0)
    if (flo > 0) == (fhi > 0):
        raise DomainError(
            f"find_root: no sign change on [{lo}, {hi}] (f(lo)={flo!r}, f(hi)={fhi!r})"
        )
    iterations = 0
    mid = 0.5 * (lo + hi)
    while (hi - lo) * 0.5 > tol:
        iterations += 1
        if iterations > max_iter:
            raise ConvergenceError(
                f"find_root: bracket width {hi - lo!r} above tol={tol!r} after {max_iter} iterations"
            )
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            # no representable point strictly inside the bracket
            break
        fm = f(mid)
        if fm == 0.0:
            return RootResult(mid, 0.0, iterations)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    mid = 0.5 * (lo + hi)
    return RootResult(mid, f(mid), iterations)


_GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0


def maximize_1d(
    f: Callable[[float], float],
    domain: Interval,
    tol: float = 1e-6,
    grid_points: int = 512,
) -> MaxResult:
    """Maximum of f over a positive interval.

    Evaluates f on a logarithmic grid (at least 256 points), then refines
    around the best grid point with golden-section search in log coordinates
    down to relative width tol. The returned value is never below any grid
    sample (every evaluation is tracked).
    """
    if grid_points < 256:
        raise DomainError(f"maximize_1d: need grid_points >= 256, got {grid_points}")
    if domain.hi <= 0:
        raise DomainError(f"maximize_1d: domain must reach positive values, got {domain}")
    lo = max(domain.lo, 1e-300)
    xs = np.geomspace(lo, domain.hi, grid_points)

    def safe(x: float) -> float:
        v = f(float(x))
        return -math.inf if math.isnan(v) else v

    best_x, best_v = xs[0], -math.inf
    vals = np.empty(grid_points)
    for i, x in enumerate(xs):
        vals[i] = safe(x)
        if vals[i] > best_v:
            best_x, best_v = float(x), float(vals[i])
    i = int(np.argmax(vals))

    a = math.log(xs[max(i - 1, 0)])
    b = math.log(xs[min(i + 1, grid_points - 1)])

    def g(t: float) -> float:
        return safe(math.exp(t))

    c = b - _GOLDEN_RATIO * (b - a)
    d = a + _GOLDEN_RATIO * (b - a)
    fc, fd = g(c), g(d)
    while b - a > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _GOLDEN_RATIO * (b - a)
            fd = g(d)
        else:
            b, d, fd = d, c, fc
            c = b - _GOLDEN_RATIO * (b - a)
            fc = g(c)
        for t, v in ((c, fc), (d, fd)):
            if v > best_v:
                best_x, best_v = math.exp(t), v
    return MaxResult(best_x, best_v)
