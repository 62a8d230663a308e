"""Sign-matrix certificates: frozen values, identities, and domain edges."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erasurelab.errors import DomainError, SideConditionError
from erasurelab.pm1_bounds import (
    CONCENTRATION_KAPPA,
    ErasureLevel,
    admissible_alpha_max,
    concentration_bound_pm1,
    concentration_bound_subgaussian,
    f_q,
    jl_certificate,
    khb_tail_bound,
    khinchine_constants,
    order_stat_expectation_bound,
    p0_khinchine,
    q_beta,
    srip_certificate,
    t_pm1,
    t_threshold,
    theta_estimates,
)


def _ln_term(beta: float) -> float:
    return (1.0 - beta) * math.log(1.0 - beta) + beta * math.log(beta)


def test_threshold_value_and_residual():
    t = t_pm1()
    assert abs(t - 0.0376) <= 5e-4
    assert abs(f_q(0.5, t)) <= 1e-9


def test_threshold_monotone_in_q():
    qs = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5]
    ts = [t_threshold(q) for q in qs]
    assert all(a < b for a, b in zip(ts, ts[1:]))
    for q, t in zip(qs, ts):
        assert abs(f_q(q, t)) <= 1e-9


def test_f_q_continuous_extension():
    # t log t -> 0 at the endpoints
    assert f_q(0.3, 0.0) == pytest.approx(0.1, abs=1e-15)
    assert f_q(0.3, 1.0) == pytest.approx(0.0, abs=1e-15)


def test_q_beta_frozen_and_limit():
    assert q_beta(0.01) == pytest.approx(0.16970161925711313, rel=1e-12)
    # exactly 1/2 at the threshold: -3 ln_term/(1-t) = 1/2 there
    assert q_beta(t_pm1() - 1e-12) == pytest.approx(0.5, abs=1e-9)
    for beta in (0.001, 0.01, 0.03):
        assert q_beta(beta) == pytest.approx(
            min(-3.0 * _ln_term(beta) / (1.0 - beta), 0.5), rel=1e-14
        )
    with pytest.raises(DomainError):
        q_beta(t_pm1())
    with pytest.raises(DomainError):
        q_beta(0.0)


def test_admissible_alpha_max():
    for beta in (0.005, 0.02, 0.037):
        amax = admissible_alpha_max(beta)
        assert 0.0 < amax <= 1.0 / 12.0
        assert amax == pytest.approx(min(f_q(0.5, beta), 1.0 / 12.0), rel=1e-14)


def test_erasure_level_validation_order():
    with pytest.raises(DomainError, match="sign-matrix threshold"):
        ErasureLevel(beta=0.05, alpha=0.01)
    with pytest.raises(DomainError, match="admissible maximum"):
        ErasureLevel(beta=0.01, alpha=0.2)
    with pytest.raises(DomainError):
        ErasureLevel(beta=0.0, alpha=0.01)
    lvl = ErasureLevel.unchecked(beta=0.25, alpha=0.5)
    assert (lvl.beta, lvl.alpha) == (0.25, 0.5)
    with pytest.raises(DomainError):
        ErasureLevel.unchecked(beta=1.5, alpha=0.5)


def test_theta_estimates_frozen():
    est = theta_estimates(ErasureLevel(beta=0.01, alpha=0.02))
    beta, alpha = 0.01, 0.02
    theta_lower = min(
        0.5 - 3.0 * (alpha - _ln_term(beta)) / (1.0 - beta), 0.5 - alpha
    )
    assert est.theta_lower == pytest.approx(theta_lower, rel=1e-14)
    assert est.theta_tilde_lower == pytest.approx((1.0 - beta) * theta_lower, rel=1e-14)
    assert est.theta_tilde_lower == pytest.approx(0.266995396935458, rel=1e-12)
    assert est.theta_upper == 1.0
    assert est.theta_tilde_upper == 1.0 - beta
    assert est.omega_tilde_lower == 1.0
    assert est.omega_tilde_upper == pytest.approx(1.0 + math.sqrt(12.0 * alpha), rel=1e-14)
    w = (
        math.sqrt(5.0 * alpha / (1.0 - beta))
        + math.sqrt(2.0 * math.e * math.log(math.e / (1.0 - beta)))
    ) ** 2
    assert est.omega_upper == pytest.approx(w, rel=1e-14)


def test_theta_estimates_omega_lower_row_count():
    lvl = ErasureLevel(beta=0.01, alpha=0.02)
    # with n given and beta*n >= 1 the erased-row bound kicks in
    est_n = theta_estimates(lvl, n=200)
    assert est_n.omega_lower == pytest.approx(1.0 / (1.0 - 0.005), rel=1e-14)
    est_small = theta_estimates(lvl, n=50)  # beta*n = 0.5 < 1: nothing erased
    assert est_small.omega_lower == 1.0


@settings(max_examples=60, deadline=None)
@given(
    beta=st.floats(1e-4, 0.0376, allow_nan=False),
    frac=st.floats(0.01, 0.95, allow_nan=False),
)
def test_estimate_ordering_properties(beta, frac):
    alpha = frac * admissible_alpha_max(beta)
    if alpha <= 0.0:
        return
    est = theta_estimates(ErasureLevel(beta=beta, alpha=alpha))
    assert 0.0 < est.theta_lower <= 0.5
    assert 0.0 < est.theta_tilde_lower < est.theta_tilde_upper <= 1.0
    assert est.theta_lower < est.theta_upper
    assert 1.0 == est.omega_tilde_lower < est.omega_tilde_upper
    assert est.omega_lower < est.omega_upper


def test_theta_lower_vanishes_at_admissible_max():
    # at alpha = f_q(1/2, beta) the lower isometry estimate degenerates to 0
    beta = 0.03
    est = theta_estimates(ErasureLevel(beta=beta, alpha=admissible_alpha_max(beta)))
    assert abs(est.theta_lower) <= 1e-12


def test_srip_certificate_frozen_example():
    cert = srip_certificate(
        ErasureLevel(beta=0.01, alpha=0.02), s=2, m=64, n=4096, epsilon=0.25
    )
    lhs = 2.0 * math.log(24.0 * math.e * 64.0 / (0.25 * 2.0))
    want_bound = math.exp(math.log(2.0) + lhs - 0.02 * 4096.0)
    assert cert.failure_prob_bound == pytest.approx(want_bound, rel=1e-12)
    assert cert.failure_prob_bound == pytest.approx(3.6902638993283645e-28, rel=1e-9)
    est = theta_estimates(ErasureLevel(beta=0.01, alpha=0.02), n=4096)
    root = math.sqrt(est.theta_tilde_lower) - (0.25 / 8.0) * math.sqrt(est.omega_tilde_upper)
    assert cert.theta_eps == pytest.approx(root * root, rel=1e-12)
    assert cert.omega_tilde_scaled == pytest.approx(est.omega_tilde_upper * 1.5, rel=1e-12)
    assert cert.omega_scaled == pytest.approx(est.omega_upper * 1.5, rel=1e-12)
    assert cert.violations == ()


def test_srip_monotone_in_n_and_s():
    lvl = ErasureLevel(beta=0.01, alpha=0.02)
    bounds_n = [
        srip_certificate(lvl, s=2, m=64, n=n, epsilon=0.25).failure_prob_bound
        for n in (2048, 4096, 8192)
    ]
    assert bounds_n[0] > bounds_n[1] > bounds_n[2]
    bounds_s = [
        srip_certificate(lvl, s=s, m=64, n=8192, epsilon=0.25).failure_prob_bound
        for s in (1, 2, 4)
    ]
    assert bounds_s[0] < bounds_s[1] < bounds_s[2]


def test_srip_side_conditions():
    lvl = ErasureLevel(beta=0.01, alpha=0.02)
    # n too small for the covering count
    with pytest.raises(SideConditionError, match="alpha\\*n"):
        srip_certificate(lvl, s=2, m=64, n=256, epsilon=0.25)
    clamped = srip_certificate(lvl, s=2, m=64, n=256, epsilon=0.25, clamp=True)
    assert clamped.violations
    assert clamped.failure_prob_bound == 1.0
    # near the admissible-alpha ceiling theta_tilde degenerates and the
    # root side condition fails for any workable epsilon
    tight = ErasureLevel(beta=0.03, alpha=admissible_alpha_max(0.03))
    with pytest.raises(SideConditionError, match="sqrt\\(theta_tilde\\)"):
        srip_certificate(tight, s=2, m=64, n=10**6, epsilon=0.25)
    clamped = srip_certificate(tight, s=2, m=64, n=10**6, epsilon=0.25, clamp=True)
    assert clamped.theta_eps == 0.0
    with pytest.raises(DomainError):
        srip_certificate(lvl, s=0, m=64, n=4096, epsilon=0.25)
    with pytest.raises(DomainError):
        srip_certificate(lvl, s=65, m=64, n=4096, epsilon=0.25)


def test_jl_certificate_two_points_exact():
    # alpha n = ln 4 makes the union bound exactly N(N-1)/4 = 1/2
    n = 2000
    alpha = math.log(4.0) / n
    cert = jl_certificate(ErasureLevel(beta=0.01, alpha=alpha), n_points=2, n=n)
    assert cert.failure_prob_bound == pytest.approx(0.5, rel=1e-12)


def test_jl_certificate_frozen_example():
    cert = jl_certificate(ErasureLevel(beta=0.01, alpha=0.02), n_points=10, n=2000)
    assert cert.failure_prob_bound == pytest.approx(90.0 * math.exp(-40.0), rel=1e-12)
    est = theta_estimates(ErasureLevel(beta=0.01, alpha=0.02))
    assert cert.theta_tilde == pytest.approx(est.theta_tilde_lower, rel=1e-14)
    assert cert.omega_tilde == pytest.approx(est.omega_tilde_upper, rel=1e-14)
    assert cert.theta_scaled == pytest.approx(est.theta_tilde_lower / 0.99, rel=1e-14)


def test_jl_certificate_precondition():
    # n must exceed ln(N(N-1))/alpha
    with pytest.raises(SideConditionError):
        jl_certificate(ErasureLevel(beta=0.01, alpha=0.02), n_points=10, n=220)
    cert = jl_certificate(ErasureLevel(beta=0.01, alpha=0.02), n_points=10, n=226)
    assert cert.failure_prob_bound < 1.0


def test_khinchine_constants_closed_forms():
    p, a, b = khinchine_constants(4.0)
    assert b == pytest.approx(3.0 ** 0.25, rel=1e-12)  # E Z^4 = 3
    assert a == 1.0
    p, a, b = khinchine_constants(1.0)
    assert a == pytest.approx(2.0 ** -0.5, rel=1e-12)
    assert b == 1.0
    assert khinchine_constants(2.0) == (2.0, 1.0, 1.0)
    p, a, b = khinchine_constants(3.0)
    # E|Z|^3 = 2 sqrt(2/pi)
    assert b == pytest.approx((2.0 * math.sqrt(2.0 / math.pi)) ** (1.0 / 3.0), rel=1e-12)


def test_khinchine_p0():
    p0 = p0_khinchine()
    assert 1.846 <= p0 <= 1.849
    assert abs(math.lgamma((p0 + 1.0) / 2.0) - math.log(math.sqrt(math.pi) / 2.0)) <= 1e-10
    # a(p) is continuous across p0 and equals 1 at p = 2
    _, below, _ = khinchine_constants(p0 - 1e-9)
    _, above, _ = khinchine_constants(p0 + 1e-9)
    assert abs(below - above) <= 1e-7
    _, near_two, _ = khinchine_constants(2.0 - 1e-9)
    assert abs(near_two - 1.0) <= 1e-7


@settings(max_examples=60, deadline=None)
@given(p=st.floats(0.1, 8.0, allow_nan=False))
def test_khinchine_window_order(p):
    _, a, b = khinchine_constants(p)
    assert 0.0 < a <= 1.0 <= b


def test_auxiliary_bounds_closed_forms():
    assert CONCENTRATION_KAPPA == pytest.approx(1.0 / 12.0, rel=1e-15)
    eps, m = 0.3, 200
    assert concentration_bound_pm1(eps, m) == pytest.approx(
        math.exp(-(eps**2 / 4.0 - eps**3 / 6.0) * m), rel=1e-14
    )
    assert concentration_bound_subgaussian(eps, m) == pytest.approx(
        math.exp(-(eps**2) * m / 12.0), rel=1e-14
    )
    assert khb_tail_bound(0.3, 60) == pytest.approx(math.exp(-0.3 * 60 / 3.0), rel=1e-14)
    assert order_stat_expectation_bound(1000, 10) == pytest.approx(
        math.sqrt(2.0 * math.e * math.log(math.e * 1000.0 / 10.0)), rel=1e-14
    )
    assert order_stat_expectation_bound(1000, 10, b=2.0) == pytest.approx(
        2.0 * order_stat_expectation_bound(1000, 10), rel=1e-14
    )


def test_auxiliary_bound_domains():
    with pytest.raises(DomainError):
        khb_tail_bound(0.0, 10)
    with pytest.raises(DomainError):
        khb_tail_bound(1.0, 10)
    with pytest.raises(DomainError):
        concentration_bound_pm1(0.0, 10)
    with pytest.raises(DomainError):
        order_stat_expectation_bound(10, 0)
    with pytest.raises(DomainError):
        order_stat_expectation_bound(10, 11)
