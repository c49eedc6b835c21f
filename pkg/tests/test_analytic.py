import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from zenoprobe import analytic
from zenoprobe.analytic import (
    RateSet,
    absorption_rate_gamma0,
    averaged_survival,
    averaged_v_survival,
    decay_rate_gamma,
    effective_measurement_rate,
    nonrandom_survival,
    random_survival,
    rate_equation_rhs,
    rates_for,
    validity_check,
    weak_measurement_survival,
    zeno_exponential,
)
from zenoprobe.errors import DomainError, SingularityError
from zenoprobe.polarization import measurement_matrix, rotation_matrix

DPHI = math.radians(4.0)
COS14 = math.cos(DPHI) ** 14


def transfer_power_oracle(k, dphi, theta):
    """(Pi U)^k applied to |H>, by explicit matrix powers."""
    m = np.linalg.matrix_power(measurement_matrix(theta) @ rotation_matrix(dphi), k)
    return (m @ [1.0, 0.0])[0] ** 2


class TestNonRandom:
    def test_limits(self):
        assert nonrandom_survival(7, DPHI, 1.0) == pytest.approx(math.cos(7 * DPHI) ** 2, abs=1e-12)
        assert nonrandom_survival(7, DPHI, 1.0) == pytest.approx(0.779596, abs=5e-7)
        assert nonrandom_survival(7, DPHI, 0.0) == pytest.approx(COS14, abs=1e-12)
        assert nonrandom_survival(0, 0.3, 0.4) == 1.0

    def test_limit_identities_over_k(self):
        k = np.arange(0, 60)
        np.testing.assert_allclose(nonrandom_survival(k, DPHI, 1.0), np.cos(k * DPHI) ** 2, atol=1e-12)
        np.testing.assert_allclose(nonrandom_survival(k, DPHI, 0.0), np.cos(DPHI) ** (2 * k), atol=1e-12)

    @given(st.integers(0, 40), st.floats(0.0, 1.5), st.floats(0.0, 1.0))
    def test_matches_matrix_power(self, k, dphi, theta):
        assert nonrandom_survival(k, dphi, theta) == pytest.approx(
            transfer_power_oracle(k, dphi, theta), abs=1e-9
        )

    def test_confluent_point(self):
        theta = 0.3
        dphi = math.acos(2 * math.sqrt(theta) / (1 + theta))
        for k in (1, 2, 5, 11):
            val = nonrandom_survival(k, dphi, theta)
            assert val == pytest.approx(transfer_power_oracle(k, dphi, theta), rel=1e-9)
            # continuous through the degeneracy
            assert nonrandom_survival(k, dphi * (1 + 1e-8), theta) == pytest.approx(val, rel=1e-6)

    def test_bounds(self):
        for theta in np.linspace(0, 1, 11):
            p = nonrandom_survival(np.arange(30), 0.2, theta)
            assert np.all((p >= -1e-15) & (p <= 1 + 1e-12))


def test_zeno_exponential_examples():
    assert zeno_exponential(0.0, DPHI, 1.0, 0.3) == 1.0
    assert zeno_exponential(7, DPHI, 1.0, 0.0) == pytest.approx(math.exp(-7 * DPHI**2), rel=1e-14)
    assert zeno_exponential(7, DPHI, 1.0, 0.0) == pytest.approx(0.96645, abs=1e-5)
    # exp(-7 * 3 * dphi^2) = 0.902712
    assert zeno_exponential(7, DPHI, 1.0, 0.5) == pytest.approx(math.exp(-21 * DPHI**2), rel=1e-14)
    assert zeno_exponential(7, DPHI, 1.0, 0.5) == pytest.approx(0.902712, abs=1e-6)
    with pytest.raises(DomainError):
        zeno_exponential(1.0, DPHI, 1.0, 1.0)


def test_zeno_exponential_approximates_closed_form():
    # small dphi << 1 - theta: exponential and exact closed form agree
    dphi, theta = 0.005, 0.2
    k = np.arange(0, 200)
    exact = nonrandom_survival(k, dphi, theta)
    approx = zeno_exponential(k * 1.0, dphi, 1.0, theta)
    np.testing.assert_allclose(exact, approx, rtol=2e-4)


def test_gamma_examples():
    for theta in (0.0, 0.3, 1.0):
        assert decay_rate_gamma(DPHI, 1.0, 0.0, theta) == pytest.approx(4.87388e-3, rel=1e-5)
    assert decay_rate_gamma(DPHI, 1.0, 0.4, 1.0) == pytest.approx(1.13724e-2, rel=1e-5)
    assert decay_rate_gamma(DPHI, 1.0, -0.6, 1.0) == pytest.approx(1.21847e-3, rel=1e-5)
    with pytest.raises(SingularityError):
        decay_rate_gamma(DPHI, 1.0, 1.0, 1.0)


@pytest.mark.parametrize("c", [-0.6, 0.0, 0.4, 0.9])
def test_gamma_monotone_in_theta(c):
    thetas = np.linspace(0, 1, 21) if c < 0.95 else np.linspace(0, 0.99, 21)
    g = np.array([decay_rate_gamma(DPHI, 1.0, c, th) for th in thetas])
    d = np.diff(g)
    if c > 0:
        assert np.all(d > 0)
    elif c < 0:
        assert np.all(d < 0)
    else:
        assert np.all(d == 0)


def test_gamma0_examples():
    assert absorption_rate_gamma0(1.0, 1.0) == 0.0
    assert absorption_rate_gamma0(math.exp(-1), 1.0) == pytest.approx(1.0, rel=1e-15)
    assert absorption_rate_gamma0(0.5, 1.0) == pytest.approx(0.693147, abs=1e-6)
    assert absorption_rate_gamma0(0.5, 1.0, "half_log_theta") == pytest.approx(0.693147 / 2, abs=1e-6)
    assert math.isinf(absorption_rate_gamma0(0.0, 1.0))
    with pytest.raises(DomainError):
        absorption_rate_gamma0(0.5, 1.0, "bogus")


def test_averaged_survival_examples():
    rates = RateSet.from_rates(1.13724e-2, 0.0)
    assert averaged_survival(0.0, rates) == 1.0
    assert averaged_survival(1e6, rates) == pytest.approx(0.5, abs=1e-12)
    assert averaged_survival(7.0, rates) == pytest.approx(0.926408, abs=1e-6)
    assert averaged_survival(3.0, RateSet.from_rates(0.0, 0.0)) == 1.0


@pytest.mark.parametrize("c", [-0.6, 0.0, 0.4])
def test_theta_one_reduces_to_two_state_form(c):
    g0 = decay_rate_gamma(DPHI, 1.0, c, 1.0)
    t = np.linspace(0, 500, 101)
    np.testing.assert_allclose(
        averaged_survival(t, rates_for(DPHI, 1.0, c, 1.0)), (1 + np.exp(-2 * g0 * t)) / 2, rtol=0, atol=1e-15
    )


def test_averaged_survival_overflow_safe():
    rates = RateSet.from_rates(5.0, 300.0)
    p = averaged_survival(np.array([0.0, 10.0, 1e4]), rates)
    assert np.all(np.isfinite(p))
    assert np.all((p >= 0) & (p <= 1))


def test_weak_measurement_examples():
    assert weak_measurement_survival(0.0, 0.3) == 1.0
    assert weak_measurement_survival(7.0, DPHI**2) == pytest.approx(0.966458, abs=1e-6)
    assert weak_measurement_survival(math.log(2), 1.0) == pytest.approx(0.5, rel=1e-15)


def test_random_survival_projective_branch():
    t = np.arange(1, 8.0)
    np.testing.assert_allclose(random_survival(t, DPHI, 1.0, 0.4, 0.0), np.exp(-DPHI**2 * t))
    np.testing.assert_allclose(random_survival(t, DPHI, 1.0, 0.4, 1e-7), np.exp(-DPHI**2 * t))
    # and it is continuous with the full formula as theta -> 0
    near = random_survival(t, DPHI, 1.0, 0.4, 1e-5)
    np.testing.assert_allclose(near, np.exp(-DPHI**2 * t), rtol=1e-4)


def test_rate_equation_examples():
    r = RateSet.from_rates(2.0, 3.0)
    assert rate_equation_rhs(0.0, 0.0, r) == (0.0, 0.0)
    assert rate_equation_rhs(0.4, 0.4, RateSet.from_rates(2.0, 0.0)) == (0.0, 0.0)
    assert rate_equation_rhs(1.0, 0.0, r) == (-2.0, 2.0)


@pytest.mark.parametrize("gamma, gamma0", [(0.01, 0.0), (0.01, 0.7), (0.3, 0.05), (1.0, 2.0)])
def test_closed_form_solves_rate_equations(gamma, gamma0):
    # independent oracle: matrix exponential of the generator
    gen = np.array([[-gamma, gamma], [gamma, -gamma - 2 * gamma0]])
    rates = RateSet.from_rates(gamma, gamma0)
    for t in (0.0, 0.5, 3.0, 20.0):
        ph, pv = expm(gen * t) @ [1.0, 0.0]
        assert averaged_survival(t, rates) == pytest.approx(ph, rel=1e-12, abs=1e-15)
        assert averaged_v_survival(t, rates) == pytest.approx(pv, rel=1e-12, abs=1e-15)


def test_finite_difference_consistency_second_order():
    rates = rates_for(DPHI, 1.0, 0.4, 0.5)
    t = np.linspace(0.5, 40, 20)

    def err(h):
        dh = (averaged_survival(t + h, rates) - averaged_survival(t - h, rates)) / (2 * h)
        dv = (averaged_v_survival(t + h, rates) - averaged_v_survival(t - h, rates)) / (2 * h)
        rh, rv = rate_equation_rhs(averaged_survival(t, rates), averaged_v_survival(t, rates), rates)
        return np.abs(dh - rh) + np.abs(dv - rv)

    ratio = err(0.02) / err(0.01)
    np.testing.assert_allclose(ratio, 4.0, rtol=0.05)


def test_nu_definition():
    assert effective_measurement_rate(0.0, 2.0) == 0.5
    assert effective_measurement_rate(1.0, 1.0) == 0.0
    r = rates_for(DPHI, 1.0, 0.0, 0.5)
    assert r.nu * 1.0 == pytest.approx((1 - 0.5) / (1 + 0.5))
    assert r.s >= max(r.gamma, r.gamma0)


def test_validity_examples():
    ok, ratio = validity_check(DPHI, 0.4, 1.0)
    assert ok and ratio == pytest.approx(0.0135, abs=1e-4)
    ok, ratio = validity_check(DPHI, 0.999, 1.0)
    assert not ok
    # dphi^2 / (0.001 * 0.001)
    assert ratio == pytest.approx(DPHI**2 / 1e-6, rel=1e-9)
    assert validity_check(0.0, 0.9, 0.5) == (True, 0.0)
    assert validity_check(0.1, 1.0, 1.0) == (False, math.inf)


@given(st.floats(0, 1e3), st.floats(-0.99, 0.99), st.floats(0.0, 1.0))
def test_survival_is_probability(t, c, theta):
    p = random_survival(t, DPHI, 1.0, c, theta)
    assert -1e-15 <= p <= 1.0 + 1e-15


def test_convention_constant_is_named():
    assert analytic.DEFAULT_GAMMA0_CONVENTION == "log_theta"
    assert set(analytic.GAMMA0_CONVENTIONS) == {"log_theta", "half_log_theta"}
