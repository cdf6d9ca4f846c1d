import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from supercurve.numeric import (
    LAMBDA,
    TWO_PI_I,
    GrassNum,
    NumConfig,
    PoleAt,
    SegmentThroughPole,
    cross_check,
    eta1_series,
    field_eval,
    grass_eval,
    invariance_check,
    legendre_check,
    num_eval,
    period_check,
    period_matrix,
    quasi_periodicity_check,
    quasi_periods,
)

TAUS = [0.3 + 1.2j, 1j, -0.4 + 0.8j, 0.5 + 2j]


def test_lambda_squares_to_two_pi_i():
    assert abs(LAMBDA**2 - TWO_PI_I) < 1e-14


def test_config_validation():
    with pytest.raises(ValueError):
        NumConfig(tau=0.5 - 1j)
    with pytest.raises(ValueError):
        NumConfig(nodes=1)


def test_grassnum_algebra():
    th, ph = GrassNum.theta(), GrassNum.phi()
    assert (th * ph + ph * th).distance(0) == 0
    assert (th * th).distance(0) == 0
    assert ((1 + th * ph) * (1 - th * ph)).distance(1) == 0
    assert not th.is_even() and (th * ph).is_even()


def test_wp_laurent_leading_term():
    z = 1e-3
    assert abs(num_eval("wp", z) * z * z - 1) < 1e-5


def test_wp_even_and_periodic():
    cfg = NumConfig()
    z = 0.21 + 0.13j
    assert abs(num_eval("wp", z, cfg) - num_eval("wp", -z, cfg)) < 1e-10
    assert abs(num_eval("wp", z, cfg) - num_eval("wp", z + 1 + cfg.tau, cfg)) < 1e-9


def test_pole_detected():
    with pytest.raises(PoleAt):
        num_eval("wp", 0)
    with pytest.raises(PoleAt):
        num_eval("zeta1", 1 + NumConfig().tau)


def test_unknown_function():
    with pytest.raises(KeyError):
        num_eval("sigma", 0.2)


def test_wp_prime_is_derivative():
    cfg = NumConfig()
    z, h = 0.17 + 0.31j, 1e-5
    wpp = num_eval("wp_prime", z, cfg)
    diff = (num_eval("wp", z + h, cfg) - num_eval("wp", z - h, cfg)) / (2 * h)
    assert abs(diff - wpp) < 1e-5 * abs(wpp)


@pytest.mark.parametrize("tau", TAUS)
def test_legendre(tau):
    assert all(r.passed for r in legendre_check(NumConfig(tau=tau)))


@pytest.mark.parametrize("tau", TAUS)
def test_periods(tau):
    assert period_check(NumConfig(tau=tau), tol=1e-8).passed


def test_period_matrix_is_identity_like():
    m = period_matrix(NumConfig())
    assert abs(m[0][0] - 1) < 1e-9 and abs(m[0][1]) < 1e-9
    assert abs(m[1][0]) < 1e-9 and abs(m[1][1] - 1) < 1e-9


def test_quasi_periods_against_series():
    cfg = NumConfig(tau=1j)
    e1, e2 = quasi_periods(cfg)
    assert abs(e1 - eta1_series(cfg)) < 1e-9
    # at tau = i the Legendre relation gives eta2 = i*eta1 - 2 pi i
    assert abs(e2 - (1j * e1 - TWO_PI_I)) < 1e-9


def test_segment_through_pole():
    with pytest.raises(SegmentThroughPole):
        quasi_periods(NumConfig(), z_base=-0.5)


def test_quasi_periodicity():
    assert all(r.passed for r in quasi_periodicity_check(0.2 + 0.1j))


def test_grass_eval_shift():
    cfg = NumConfig()
    th, ph = GrassNum.theta(), GrassNum.phi()
    z = GrassNum(0.3 + 0.2j) + th * ph
    v = grass_eval("zeta1", z, cfg)
    want = num_eval("zeta1", 0.3 + 0.2j, cfg, False) * GrassNum(1) \
        + th * ph * num_eval("zeta1_prime", 0.3 + 0.2j, cfg, False)
    assert v.distance(want) < 1e-12
    with pytest.raises(ValueError):
        grass_eval("zeta1", th, cfg)


def test_field_eval_components():
    cfg = NumConfig()
    v = field_eval("Psi1", 0.2 + 0.1j, cfg)
    assert v.c[0] == 0 and v.c[1] == 1
    assert abs(v.c[2] + num_eval("zeta1", 0.2 + 0.1j, cfg)) < 1e-12


_z = st.builds(complex, st.floats(-0.45, 0.45), st.floats(0.05, 0.7))
_tau = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.8, 1.6))


@settings(max_examples=20, deadline=None)
@given(_z, _tau)
def test_invariance_random_points(z, tau):
    frac = z.imag / tau.imag
    cfg = NumConfig(tau=tau)
    z0 = z.real + frac * tau
    for name in ("Psi1", "Psi2"):
        for r in invariance_check(name, z0, cfg):
            assert r.passed, (r.name, r.notes)


def test_cross_check_with_symbolic(curve):
    cfg = NumConfig(tau=0.1 + 0.7j)
    assert abs(cfg.q) <= 0.05
    z0 = 0.1 * cmath.exp(0.7j)
    assert all(r.passed for r in cross_check(curve, z0, cfg)), cross_check(curve, z0, cfg)
    assert math.isclose(abs(z0), 0.1)
