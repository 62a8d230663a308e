"""Gaussian frame bounds: defining identities, domination, and oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erasurelab.errors import DomainError, SideConditionError
from erasurelab.gauss_frame_bounds import (
    FrameShape,
    chi2_tail_bound,
    mu_eps,
    nerf_certificate,
    p_small,
    q_small,
    r_large,
    square_nerf_certificate,
)
from erasurelab.specfun import chi2_lower_cdf, lambert_w0


def test_q_small_defining_identity():
    # q solves ln(q(1-lam)) - q(1-lam) + 6/5 = -2 alpha (1-lam)
    for alpha in (0.1, 0.5, 1.0, 2.0, 5.0):
        for lam in np.arange(0.1, 0.95, 0.1):
            q = q_small(alpha, float(lam))
            y = q * (1.0 - lam)
            resid = math.log(y) - y + 1.2 + 2.0 * alpha * (1.0 - lam)
            assert abs(resid) <= 1e-9, (alpha, lam, resid)


def test_q_small_frozen_value():
    assert q_small(0.1, 0.5) == pytest.approx(
        -2.0 * lambert_w0(-math.exp(-1.3)), rel=1e-12
    )


@settings(max_examples=80, deadline=None)
@given(
    alpha=st.floats(1e-3, 20.0, allow_nan=False),
    lam=st.floats(1e-3, 0.999, allow_nan=False),
)
def test_q_small_range(alpha, lam):
    q = q_small(alpha, lam)
    assert 0.0 < q < 1.0 / (1.0 - lam)


def test_chi2_tail_equals_target_at_q_small():
    for alpha in (0.1, 1.0, 3.0):
        for lam in (0.2, 0.5, 0.8):
            for m in (1, 10, 137):
                bound = chi2_tail_bound(q_small(alpha, lam), lam, m)
                assert math.log(bound) == pytest.approx(-alpha * m, abs=1e-8)


def test_chi2_tail_dominates_exact_cdf():
    rng = np.random.default_rng(42)
    for _ in range(10_000):
        lam = float(rng.uniform(0.05, 0.95))
        q = float(rng.uniform(1e-6, 1.0)) / (1.0 - lam)
        m = int(rng.integers(1, 400))
        dof = m / (1.0 - lam)
        exact = chi2_lower_cdf(dof, q * m)
        assert chi2_tail_bound(q, lam, m) >= exact - 1e-15, (q, lam, m)


def test_chi2_tail_not_clamped():
    # at the domain edge q = 1/(1-lam) the exponent is +m/(10(1-lam))
    lam, m = 0.5, 10
    q = 1.0 / (1.0 - lam)
    assert chi2_tail_bound(q, lam, m) == pytest.approx(math.exp(m / 5.0), rel=1e-12)
    with pytest.raises(DomainError):
        chi2_tail_bound(q + 1e-9, lam, m)
    with pytest.raises(DomainError):
        chi2_tail_bound(0.0, lam, m)


def test_r_large_closed_form():
    for alpha in (0.0, 0.3, 2.0):
        for lam in (0.05, 0.25, 0.9):
            want = (1.0 - lam) ** -0.5 + 1.0 + math.sqrt(2.0 * alpha)
            assert r_large(alpha, lam) == pytest.approx(want, rel=1e-14)
    with pytest.raises(DomainError):
        r_large(-0.1, 0.5)
    with pytest.raises(DomainError):
        r_large(1.0, 1.0)


def test_mu_eps():
    assert mu_eps(0.7, 1.0) == pytest.approx(0.7 + math.log(3.0), rel=1e-14)
    assert mu_eps(0.0, 0.5) == pytest.approx(math.log(5.0), rel=1e-14)
    with pytest.raises(DomainError):
        mu_eps(0.5, 0.0)


def test_p_small_below_sup_envelope():
    # dropping the -eps r term and taking eps -> 1 bounds the objective
    for alpha in (0.1, 0.6, 2.0):
        for lam in (0.1, 0.5, 0.9):
            assert p_small(alpha, lam) < math.sqrt(q_small(mu_eps(alpha, 1.0), lam))


def test_p_small_positive_on_grid():
    for alpha in (0.05, 0.3, 1.0, 2.5, 5.0):
        for lam in (0.05, 0.3, 0.5, 0.7, 0.95):
            assert p_small(alpha, lam) > 0.0, (alpha, lam)


def test_p_small_dense_scan_oracle():
    alpha, lam = 0.597, 0.5

    def objective(eps):
        mu = mu_eps(alpha, eps)
        return math.sqrt(q_small(mu, lam)) - eps * r_large(mu, lam)

    grid = np.geomspace(1e-12, 1.0 - 1e-6, 10_000)
    scan = max(objective(float(e)) for e in grid)
    got = p_small(alpha, lam)
    assert got >= scan - 1e-12
    assert got == pytest.approx(scan, rel=1e-5)


def test_nerf_certificate_structure():
    cert = nerf_certificate(0.1, 0.5, 0.25)
    entropy = -(0.25 * math.log(0.25) + 0.75 * math.log(0.75))
    assert cert.alpha == pytest.approx(0.1 + entropy / 0.5, rel=1e-14)
    assert cert.lambda_beta == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert cert.P == pytest.approx(p_small(cert.alpha, cert.lambda_beta), rel=1e-12)
    assert cert.R == pytest.approx(r_large(cert.alpha, cert.lambda_beta), rel=1e-12)
    assert cert.C == pytest.approx(cert.R / cert.P, rel=1e-12)
    assert cert.m is None and cert.success_prob_bound is None


def test_nerf_certificate_success_probability():
    cert = nerf_certificate(0.1, 0.5, 0.25, m=200)
    assert cert.success_prob_bound == pytest.approx(1.0 - 3.0 * math.exp(-20.0), rel=1e-12)


def test_nerf_certificate_beta_to_zero_limit():
    cert = nerf_certificate(0.1, 0.5, 1e-12)
    assert cert.alpha == pytest.approx(0.1, abs=1e-9)
    assert cert.P == pytest.approx(p_small(0.1, 0.5), rel=1e-6)
    assert cert.R == pytest.approx(r_large(0.1, 0.5), rel=1e-6)


def test_nerf_certificate_square_redirect():
    with pytest.raises(SideConditionError, match="square_nerf_certificate"):
        nerf_certificate(0.1, 0.5, 0.5)
    with pytest.raises(SideConditionError):
        nerf_certificate(0.1, 0.3, 0.4)
    with pytest.raises(DomainError):
        nerf_certificate(0.0, 0.5, 0.25)
    with pytest.raises(DomainError):
        nerf_certificate(0.1, 0.5, 0.0)


def _square_rate(lam: float) -> float:
    return lam * (1.0 - math.log(lam)) / (1.0 - lam)


def test_square_certificate_frozen_example():
    cert = square_nerf_certificate(4.0, 0.1, 0.5, 400)
    assert cert.level == pytest.approx((2.0 + math.sqrt(8.0)) * 400.0 / 0.1, rel=1e-12)
    assert cert.level == pytest.approx(19313.708498984757, rel=1e-12)
    # e^{rate m} c overwhelms 1 here: the bound degrades to 0, not below
    assert cert.success_prob_bound == 0.0


def test_square_certificate_meaningful_success():
    lam, m = 0.5, 20
    rate = _square_rate(lam)
    c = 0.01 * math.exp(-rate * m)
    cert = square_nerf_certificate(rate + 3.0, c, lam, m)
    want = 1.0 - 0.01 - math.exp(m * (rate - (rate + 3.0)))
    assert cert.success_prob_bound == pytest.approx(want, rel=1e-9)
    assert cert.level == pytest.approx((2.0 + math.sqrt(2.0 * (rate + 3.0))) * m / c, rel=1e-12)


def test_square_certificate_rate_precondition():
    rate = _square_rate(0.5)
    with pytest.raises(SideConditionError, match="must exceed"):
        square_nerf_certificate(rate + 1.0, 0.1, 0.5, 100)
    cert = square_nerf_certificate(rate + 1.0 + 1e-9, 0.1, 0.5, 100)
    assert cert.alpha > rate + 1.0


def test_frame_shape():
    fs = FrameShape(n=100, m=40)
    assert fs.lam == pytest.approx(0.6, rel=1e-15)
    with pytest.raises(DomainError):
        FrameShape(n=40, m=40)
    with pytest.raises(DomainError):
        FrameShape(n=40, m=0)
