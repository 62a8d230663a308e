"""Condition-number certificates for tall Gaussian matrices under row erasures.

An n x m matrix A (n > m) with i.i.d. standard normal entries is treated as
a frame of n row vectors; lambda = 1 - m/n is its redundancy rate. The
certificates bound, with explicit probability, the condition number of every
submatrix A_T obtained by deleting up to beta*n rows:

* extreme-singular-value ingredients: r_large (upper tail of s_max at scale
  sqrt(m)), q_small (a Lambert-W lower bound for the chi-square column-norm
  tail), and p_small (the net-argument lower bound for s_min, a supremum
  over the net radius epsilon);
* nerf_certificate: beta < lambda, so every survivor matrix stays strictly
  tall; the condition number is at most C = R/P except with probability
  3 e^{-nu m};
* square_nerf_certificate: beta = lambda, survivor matrices are exactly
  square, where the bound degrades to a size-dependent level.

All probability expressions are evaluated in log space; exponents at
m in the thousands would otherwise overflow or underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ComputationError, DomainError, SideConditionError
from .specfun import Interval, lambert_w0, maximize_1d

#: Supremum domain for the net radius: the hard floor keeps geomspace grids
#: finite while reaching the tiny maximizers that occur at small lambda
#: (the optimal epsilon can sit below 1e-90 when lambda < 0.05).
_EPS_DOMAIN = Interval(1e-300, 1.0 - 1e-6)


def _exp_clip(x: float) -> float:
    """exp with +-inf saturation instead of range errors."""
    if x > 709.0:
        return math.inf
    if x < -745.0:
        return 0.0
    return math.exp(x)


@dataclass(frozen=True)
class FrameShape:
    """Row and column counts of a strictly tall frame matrix."""

    n: int
    m: int

    def __post_init__(self):
        if not 1 <= self.m < self.n:
            raise DomainError(f"FrameShape: need 1 <= m < n, got n={self.n}, m={self.m}")

    @property
    def lam(self) -> float:
        """Redundancy rate 1 - m/n, in (0, 1)."""
        return 1.0 - self.m / self.n


def q_small(alpha: float, lam: float) -> float:
    """-(1-lam)^{-1} W0(-e^{-2 alpha (1-lam) - 6/5}).

    Lower bound scale for the column-norm tail: a chi-square vector of
    m/(1-lam) entries has ||.||^2 <= q_small * m with probability at most
    e^{-alpha m}. With u = q_small*(1-lam), u solves ln u - u =
    -2 alpha (1-lam) - 6/5, so the value lies in (0, (1-lam)^{-1}) and is
    strictly decreasing in alpha.
    """
    if not alpha > 0.0:
        raise DomainError(f"q_small: need alpha > 0, got {alpha!r}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"q_small: need lam in (0,1), got {lam!r}")
    one_m = 1.0 - lam
    return -lambert_w0(-_exp_clip(-2.0 * alpha * one_m - 1.2)) / one_m


def r_large(alpha: float, lam: float) -> float:
    """(1-lam)^{-1/2} + 1 + sqrt(2 alpha).

    s_max exceeds r_large * sqrt(m) with probability at most e^{-alpha m}.
    """
    if alpha < 0.0:
        raise DomainError(f"r_large: need alpha >= 0, got {alpha!r}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"r_large: need lam in (0,1), got {lam!r}")
    return 1.0 / math.sqrt(1.0 - lam) + 1.0 + math.sqrt(2.0 * alpha)


def mu_eps(alpha: float, epsilon: float) -> float:
    """alpha + ln(1 + 2/epsilon): rate inflated by the epsilon-net size."""
    if not epsilon > 0.0:
        raise DomainError(f"mu_eps: need epsilon > 0, got {epsilon!r}")
    return alpha + math.log1p(2.0 / epsilon)


def _p_eps(alpha: float, lam: float, epsilon: float) -> float:
    mu = mu_eps(alpha, epsilon)
    return math.sqrt(q_small(mu, lam)) - epsilon * r_large(mu, lam)


def p_small(alpha: float, lam: float) -> float:
    """sup over epsilon of sqrt(q_small(mu, lam)) - epsilon * r_large(mu, lam).

    s_min falls below p_small * sqrt(m) with probability at most 2 e^{-alpha m}.
    The supremum is positive for every alpha > 0, lam in (0,1), but the
    maximizing epsilon shrinks dramatically as lam does.
    """
    if not alpha > 0.0:
        raise DomainError(f"p_small: need alpha > 0, got {alpha!r}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"p_small: need lam in (0,1), got {lam!r}")
    res = maximize_1d(
        lambda eps: _p_eps(alpha, lam, eps),
        _EPS_DOMAIN,
        tol=1e-10,
        grid_points=2048,
    )
    if not res.value > 0.0:
        raise ComputationError(
            f"p_small: supremum not positive at alpha={alpha!r}, lam={lam!r} "
            f"(best epsilon={res.argmax:.3e}, value={res.value:.3e})"
        )
    return res.value


@dataclass(frozen=True)
class NerfCertificate:
    """Erasure-robustness certificate for a tall Gaussian frame.

    Every survivor matrix missing at most a beta fraction of rows has
    condition number at most C = R/P, except with probability
    3 e^{-nu m}; success_prob_bound carries that complement when the
    column count m is known (None otherwise, the bound being shape-free).
    """

    nu: float
    beta: float
    lambda_beta: float
    alpha: float
    P: float
    R: float
    C: float
    m: Optional[int] = None
    success_prob_bound: Optional[float] = None


def nerf_certificate(
    nu: float, lam: float, beta: float, m: Optional[int] = None
) -> NerfCertificate:
    """Certificate at erasure ratio beta < lam for redundancy rate lam.

    lambda_beta = (lam-beta)/(1-beta) is the survivor redundancy rate;
    alpha = nu + H(beta)/(1-lam) absorbs the union bound over erasure
    patterns (H is the natural-log binary entropy); P and R are evaluated
    at (alpha, lambda_beta). Erasing beta >= lam leaves a square or wide
    matrix, outside this certificate's reach.
    """
    if not nu > 0.0:
        raise DomainError(f"nerf_certificate: need nu > 0, got {nu!r}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"nerf_certificate: need lam in (0,1), got {lam!r}")
    if not beta > 0.0:
        raise DomainError(f"nerf_certificate: need beta > 0, got {beta!r}")
    if not beta < lam:
        raise SideConditionError(
            f"beta = {beta!r} must be below lam = {lam!r}; an erasure that leaves a "
            "square matrix is covered by square_nerf_certificate instead"
        )
    lam_b = (lam - beta) / (1.0 - beta)
    entropy = -beta * math.log(beta) - (1.0 - beta) * math.log1p(-beta)
    alpha = nu + entropy / (1.0 - lam)
    P = p_small(alpha, lam_b)
    R = r_large(alpha, lam_b)
    success = None
    if m is not None:
        if m < 1:
            raise DomainError(f"nerf_certificate: need m >= 1, got {m}")
        success = max(0.0, 1.0 - 3.0 * _exp_clip(-nu * m))
    return NerfCertificate(
        nu=nu,
        beta=beta,
        lambda_beta=lam_b,
        alpha=alpha,
        P=P,
        R=R,
        C=R / P,
        m=m,
        success_prob_bound=success,
    )


@dataclass(frozen=True)
class SquareNerfCertificate:
    """Certificate for erasures that leave an exactly square matrix.

    The condition-number level grows linearly in m: level =
    (2 + sqrt(2 alpha)) * m / c, holding except with probability
    (e/lam)^{lam m/(1-lam)} c + exp(m (lam (1-ln lam)/(1-lam) - alpha)).
    """

    alpha: float
    c: float
    lam: float
    m: int
    level: float
    success_prob_bound: float


def square_nerf_certificate(
    alpha: float, c: float, lam: float, m: int
) -> SquareNerfCertificate:
    """Square-survivor certificate; alpha must clear the union-bound rate.

    The threshold is lam (1 - ln lam)/(1 - lam) + 1; below it the second
    probability term is not even decaying. c trades the level against the
    first term and may freely produce a vacuous bound.
    """
    if not 0.0 < lam < 1.0:
        raise DomainError(f"square_nerf_certificate: need lam in (0,1), got {lam!r}")
    if not c > 0.0:
        raise DomainError(f"square_nerf_certificate: need c > 0, got {c!r}")
    if m < 1:
        raise DomainError(f"square_nerf_certificate: need m >= 1, got {m}")
    rate = lam * (1.0 - math.log(lam)) / (1.0 - lam)
    if not alpha > rate + 1.0:
        raise SideConditionError(
            f"alpha = {alpha!r} must exceed lam(1-ln lam)/(1-lam) + 1 = {rate + 1.0:.6g}"
        )
    term_patterns = _exp_clip(rate * m + math.log(c))
    term_smax = _exp_clip(m * (rate - alpha))
    return SquareNerfCertificate(
        alpha=alpha,
        c=c,
        lam=lam,
        m=m,
        level=(2.0 + math.sqrt(2.0 * alpha)) * m / c,
        success_prob_bound=max(0.0, min(1.0, 1.0 - term_patterns - term_smax)),
    )


def chi2_tail_bound(q: float, lam: float, m: int) -> float:
    """exp((m/2)(1-lam)^{-1}(ln(q(1-lam)) - q(1-lam) + 6/5)).

    Chernoff-style bound for P(||Ax||^2 <= q m) with A Gaussian of
    m/(1-lam) rows and unit x; equals e^{-alpha m} when q = q_small(alpha, lam).
    Not clamped: values above 1 are legitimately vacuous (e.g. at the
    domain edge q = (1-lam)^{-1}).
    """
    if not 0.0 < lam < 1.0:
        raise DomainError(f"chi2_tail_bound: need lam in (0,1), got {lam!r}")
    one_m = 1.0 - lam
    if not 0.0 < q <= 1.0 / one_m:
        raise DomainError(f"chi2_tail_bound: need q in (0, {1.0/one_m:.6g}], got {q!r}")
    if m < 0:
        raise DomainError(f"chi2_tail_bound: need m >= 0, got {m}")
    u = q * one_m
    return _exp_clip((m / 2.0) / one_m * (math.log(u) - u + 1.2))
