"""Bounds and certificates for random sign (+-1) matrices under row erasures.

The quantities here control how well an n x m matrix with independent +-1
entries preserves norms of sparse (or finitely many) vectors after an
adversary deletes up to a beta fraction of its rows. Everything is expressed
through two families of constants:

* theta / omega: lower and upper limits for the normalized squared row sums
  (1/n)||A_T u||^2 over all erasure-survivor row sets T, with tilde versions
  normalized by the full row count and plain versions by |T|;
* certificates: explicit failure-probability bounds for the sparse isometry
  event (srip_certificate) and for pairwise distance preservation of a point
  cloud (jl_certificate).

Supporting pieces: the exponent function f_q and its root t_threshold (the
largest erasure fraction the argument tolerates), Khinchine moment constants
with the crossover exponent p0, and three standalone tail/expectation bounds
used by the Monte Carlo checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

from .errors import DomainError, SideConditionError
from .specfun import Interval, find_root, log_gamma

#: kappa in the generic sub-gaussian concentration bound exp(-kappa eps^2 n)
#: specialized to +-1 entries.
CONCENTRATION_KAPPA = 1.0 / 12.0


def f_q(q: float, t: float) -> float:
    """ln((1-t)^(1-t) t^t) + (q/3)(1-t) for q in (0, 1/2], t in [0, 1].

    Decreasing in t on (0, 1/2), with value q/3 at t = 0 and
    ln(1/2) + q/6 at t = 1/2; t = 0 and t = 1 take the continuous
    extension (t ln t -> 0).
    """
    if not 0.0 < q <= 0.5:
        raise DomainError(f"f_q: need q in (0,1/2], got {q!r}")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"f_q: need t in [0,1], got {t!r}")
    t_ln_t = t * math.log(t) if t > 0.0 else 0.0
    one_m = (1.0 - t) * math.log1p(-t) if t < 1.0 else 0.0
    return one_m + t_ln_t + (q / 3.0) * (1.0 - t)


@lru_cache(maxsize=None)
def t_threshold(q: float) -> float:
    """The unique root of f_q(q, .) in (0, 1/2); nondecreasing in q."""
    if not 0.0 < q <= 0.5:
        raise DomainError(f"t_threshold: need q in (0,1/2], got {q!r}")
    res = find_root(lambda t: f_q(q, t), Interval(1e-12, 0.5 - 1e-12), tol=1e-13)
    return res.root


def t_pm1() -> float:
    """Largest admissible erasure fraction for sign matrices (~0.0376)."""
    return t_threshold(0.5)


def q_beta(beta: float) -> float:
    """The q at which f_q(beta, q) = 0: -3 ln((1-b)^(1-b) b^b) / (1-b).

    Defined for beta below t_pm1(), where the value lies in (0, 1/2);
    clamped there against rounding.
    """
    if not 0.0 < beta < t_pm1():
        raise DomainError(f"q_beta: need 0 < beta < {t_pm1():.6f}, got {beta!r}")
    ln_term = (1.0 - beta) * math.log1p(-beta) + beta * math.log(beta)
    return min(-3.0 * ln_term / (1.0 - beta), 0.5)


def admissible_alpha_max(beta: float) -> float:
    """Upper end of the admissible alpha range at this beta.

    min(f_q(1/2, beta), 1/12): the first term is where the theta lower
    estimate degenerates to zero, the second is the cap the omega-tilde
    estimate needs. Positive exactly when beta < t_pm1().
    """
    if not 0.0 < beta < 1.0:
        raise DomainError(f"admissible_alpha_max: need beta in (0,1), got {beta!r}")
    return min(f_q(0.5, beta), 1.0 / 12.0)


@dataclass(frozen=True)
class ErasureLevel:
    """An erasure fraction beta with a rate parameter alpha.

    Construction checks beta in (0, t_pm1()) and alpha in
    (0, admissible_alpha_max(beta)]; use `unchecked` to carry parameters
    outside that range (for vacuous certificates beyond the admissible
    regime).
    """

    beta: float
    alpha: float

    def __post_init__(self):
        _check_hard_domain(self.beta, self.alpha)
        if not self.beta < t_pm1():
            raise DomainError(
                f"ErasureLevel: beta={self.beta!r} not below the sign-matrix threshold {t_pm1():.6f}"
            )
        amax = admissible_alpha_max(self.beta)
        if self.alpha > amax:
            raise DomainError(
                f"ErasureLevel: alpha={self.alpha!r} above the admissible maximum {amax:.6f} at beta={self.beta!r}"
            )

    @classmethod
    def unchecked(cls, beta: float, alpha: float) -> "ErasureLevel":
        """Bypass admissibility (not the hard domain 0<beta<1, alpha>0)."""
        _check_hard_domain(beta, alpha)
        obj = object.__new__(cls)
        object.__setattr__(obj, "beta", float(beta))
        object.__setattr__(obj, "alpha", float(alpha))
        return obj


def _check_hard_domain(beta: float, alpha: float) -> None:
    if not 0.0 < beta < 1.0:
        raise DomainError(f"ErasureLevel: need beta in (0,1), got {beta!r}")
    if not alpha > 0.0:
        raise DomainError(f"ErasureLevel: need alpha > 0, got {alpha!r}")


@dataclass(frozen=True)
class ThetaOmegaEstimates:
    theta_lower: float
    theta_upper: float
    theta_tilde_lower: float
    theta_tilde_upper: float
    omega_lower: float
    omega_upper: float
    omega_tilde_lower: float
    omega_tilde_upper: float


def theta_estimates(level: ErasureLevel, n: Optional[int] = None) -> ThetaOmegaEstimates:
    """Two-sided estimates for the theta/omega constants at this level.

    `n` only affects omega_lower, which is 1/(1 - beta/2) once beta*n >= 1
    and the trivial 1 below that; None means the large-n regime.
    """
    b, a = level.beta, level.alpha
    ln_term = (1.0 - b) * math.log1p(-b) + b * math.log(b)
    first = 0.5 - 3.0 * (a - ln_term) / (1.0 - b)
    theta_lower = min(first, 0.5 - a)
    omega_lower = 1.0 / (1.0 - b / 2.0) if (n is None or b * n >= 1.0) else 1.0
    omega_upper = (
        math.sqrt(5.0 * a / (1.0 - b)) + math.sqrt(2.0 * math.e * math.log(math.e / (1.0 - b)))
    ) ** 2
    return ThetaOmegaEstimates(
        theta_lower=theta_lower,
        theta_upper=1.0,
        theta_tilde_lower=(1.0 - b) * theta_lower,
        theta_tilde_upper=1.0 - b,
        omega_lower=omega_lower,
        omega_upper=omega_upper,
        omega_tilde_lower=1.0,
        omega_tilde_upper=1.0 + math.sqrt(12.0 * a),
    )


@dataclass(frozen=True)
class SripCertificate:
    """Sparse-isometry-under-erasure certificate for an n x m sign matrix.

    For every s-sparse unit u and every survivor set T missing at most
    beta*n rows, the event

        theta_eps <= (1/n) ||A_T u||^2 <= omega_tilde_scaled

    (and its |T|-normalized variant with theta_eps/(1-beta) and omega_scaled)
    fails with probability at most failure_prob_bound. A certificate built
    with clamp=True may carry violated side conditions in `violations`; its
    bound is then typically the vacuous 1.
    """

    level: ErasureLevel
    s: int
    m: int
    n: int
    epsilon: float
    theta_eps: float
    omega_tilde_scaled: float
    omega_scaled: float
    failure_prob_bound: float
    violations: tuple[str, ...] = field(default=())


def srip_certificate(
    level: ErasureLevel,
    s: int,
    m: int,
    n: int,
    epsilon: float,
    clamp: bool = False,
) -> SripCertificate:
    """Build the sparse-isometry certificate, checking both side conditions.

    Side conditions: s ln(24 e m / (eps s)) < alpha n - ln 2, and
    sqrt(theta_tilde) - (eps/8) sqrt(omega_tilde) > 0. In strict mode a
    failing condition raises with the inequality spelled out; with clamp=True
    the certificate is still produced, recording the violations, flooring the
    theta side at zero and clamping the failure bound into [0, 1].
    """
    if not 1 <= s <= m:
        raise DomainError(f"srip_certificate: need 1 <= s <= m, got s={s}, m={m}")
    if n < 1:
        raise DomainError(f"srip_certificate: need n >= 1, got {n}")
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"srip_certificate: need epsilon in (0,1), got {epsilon!r}")

    est = theta_estimates(level, n)
    theta_tilde = est.theta_tilde_lower
    omega_tilde = est.omega_tilde_upper
    violations: list[str] = []

    lhs = s * math.log(24.0 * math.e * m / (epsilon * s))
    rhs = level.alpha * n - math.log(2.0)
    if not lhs < rhs:
        violations.append(
            f"s*ln(24*e*m/(eps*s)) = {lhs:.6g} must be < alpha*n - ln 2 = {rhs:.6g}"
        )

    root = math.sqrt(max(theta_tilde, 0.0)) - (epsilon / 8.0) * math.sqrt(omega_tilde)
    if not root > 0.0:
        violations.append(
            f"sqrt(theta_tilde) - (eps/8)*sqrt(omega_tilde) = {root:.6g} must be > 0"
        )

    if violations and not clamp:
        raise SideConditionError("; ".join(violations))

    log_bound = math.log(2.0) + lhs - level.alpha * n
    return SripCertificate(
        level=level,
        s=s,
        m=m,
        n=n,
        epsilon=epsilon,
        theta_eps=max(root, 0.0) ** 2,
        omega_tilde_scaled=omega_tilde * (1.0 + 2.0 * epsilon),
        omega_scaled=est.omega_upper * (1.0 + 2.0 * epsilon),
        failure_prob_bound=math.exp(min(log_bound, 0.0)),
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class JlCertificate:
    """Pairwise distance preservation certificate for a point cloud.

    With probability at least 1 - failure_prob_bound, every pairwise
    difference d of the n_points points satisfies

        theta_tilde ||d||^2 <= (1/n) ||A_T d||^2 <= omega_tilde ||d||^2

    simultaneously for all survivor sets T missing at most beta*n rows
    (theta_scaled / omega apply to the |T|-normalized version).
    """

    level: ErasureLevel
    n_points: int
    n: int
    theta_tilde: float
    omega_tilde: float
    theta_scaled: float
    omega: float
    failure_prob_bound: float


def jl_certificate(level: ErasureLevel, n_points: int, n: int) -> JlCertificate:
    """Distance-preservation certificate for n_points points in any dimension."""
    if n_points < 2:
        raise DomainError(f"jl_certificate: need n_points >= 2, got {n_points}")
    if n < 1:
        raise DomainError(f"jl_certificate: need n >= 1, got {n}")
    pairs = n_points * (n_points - 1)
    required = math.log(pairs) / level.alpha
    if not n > required:
        raise SideConditionError(
            f"n = {n} must exceed ln(N(N-1))/alpha = {required:.6g} at N={n_points}, alpha={level.alpha!r}"
        )
    est = theta_estimates(level, n)
    return JlCertificate(
        level=level,
        n_points=n_points,
        n=n,
        theta_tilde=est.theta_tilde_lower,
        omega_tilde=est.omega_tilde_upper,
        theta_scaled=est.theta_tilde_lower / (1.0 - level.beta),
        omega=est.omega_upper,
        failure_prob_bound=min(1.0, pairs * math.exp(-level.alpha * n)),
    )


class KhinchineConstants(NamedTuple):
    p: float
    a: float
    b: float


_SQRT_PI = math.sqrt(math.pi)


def _gamma_moment(p: float) -> float:
    """sqrt(2) (Gamma((p+1)/2) / sqrt(pi))^(1/p): the Gaussian p-th moment."""
    return math.sqrt(2.0) * math.exp((log_gamma((p + 1.0) / 2.0) - math.log(_SQRT_PI)) / p)


@lru_cache(maxsize=1)
def p0_khinchine() -> float:
    """The exponent in (1, 2) where Gamma((p+1)/2) = sqrt(pi)/2 (~1.8474).

    Below it the best lower moment constant is 2^(1/2 - 1/p); above it the
    Gaussian moment takes over.
    """
    target = math.log(_SQRT_PI / 2.0)
    res = find_root(
        lambda p: log_gamma((p + 1.0) / 2.0) - target,
        Interval(1.5, 1.9),
        tol=1e-14,
    )
    return res.root


def khinchine_constants(p: float) -> KhinchineConstants:
    """Best constants (a, b) with a ||c|| <= (E|sum c_j eps_j|^p)^(1/p) <= b ||c||."""
    if not p > 0:
        raise DomainError(f"khinchine_constants: need p > 0, got {p!r}")
    if p >= 2.0:
        b = 1.0 if p == 2.0 else _gamma_moment(p)
        return KhinchineConstants(p=p, a=1.0, b=b)
    if p <= p0_khinchine():
        a = 2.0 ** (0.5 - 1.0 / p)
    else:
        a = _gamma_moment(p)
    return KhinchineConstants(p=p, a=a, b=1.0)


def concentration_bound_pm1(epsilon: float, m: int) -> float:
    """exp(-(eps^2/4 - eps^3/6) m): one-sided deviation bound for
    (1/m)||Ax||^2 around ||x||^2 with +-1 entries and m rows."""
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"concentration_bound_pm1: need epsilon in (0,1), got {epsilon!r}")
    if m < 0:
        raise DomainError(f"concentration_bound_pm1: need m >= 0, got {m}")
    return math.exp(-(epsilon * epsilon / 4.0 - epsilon ** 3 / 6.0) * m)


def concentration_bound_subgaussian(epsilon: float, n: int) -> float:
    """exp(-kappa eps^2 n) with kappa = 1/12 (CONCENTRATION_KAPPA)."""
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"concentration_bound_subgaussian: need epsilon in (0,1), got {epsilon!r}")
    if n < 0:
        raise DomainError(f"concentration_bound_subgaussian: need n >= 0, got {n}")
    return math.exp(-CONCENTRATION_KAPPA * epsilon * epsilon * n)


def khb_tail_bound(q: float, n: int) -> float:
    """exp(-q n / 3): bound for P(||Ax||^2 <= (1/2 - q) n), unit x, +-1 A."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"khb_tail_bound: need q in (0,1), got {q!r}")
    if n < 0:
        raise DomainError(f"khb_tail_bound: need n >= 0, got {n}")
    return math.exp(-q * n / 3.0)


def order_stat_expectation_bound(n: int, k: int, b: float = 1.0) -> float:
    """sqrt(2 e b^2 ln(e n / k)): bounds E of the RMS of the k largest of
    |y_1|..|y_n| for independent sub-gaussian y with moment parameter b."""
    if not 1 <= k <= n:
        raise DomainError(f"order_stat_expectation_bound: need 1 <= k <= n, got n={n}, k={k}")
    if not b > 0:
        raise DomainError(f"order_stat_expectation_bound: need b > 0, got {b!r}")
    return math.sqrt(2.0 * math.e * b * b * math.log(math.e * n / k))
