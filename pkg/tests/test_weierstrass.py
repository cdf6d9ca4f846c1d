from fractions import Fraction

import pytest

from supercurve.scalars import QSeries, Scalar, named_constant
from supercurve.superfield import ONE, SuperField, d_tau
from supercurve import weierstrass as W


def test_wp_normalisation(curve):
    assert curve.wp.coefficient(-2).constant_term() == Scalar(1)
    assert curve.wp.coefficient(-1).is_zero()
    assert curve.wp.coefficient(0).is_zero()


def test_wp_first_coefficients_from_the_cubic():
    nq = 6
    wp = W.wp(10, nq)
    assert wp.coefficient(2) == named_constant("g2", nq) * Fraction(1, 20)
    assert wp.coefficient(4) == named_constant("g3", nq) * Fraction(1, 28)
    # next one by hand from wp'' = 6 wp^2 - g2/2
    g2 = named_constant("g2", nq)
    assert wp.coefficient(6) == g2 * g2 * Fraction(1, 1200)


def test_wp_is_even_with_no_odd_powers(curve):
    assert all(e % 2 == 0 for e, _ in curve.wp.keys())


def test_zeta_has_no_constant_and_is_odd(curve):
    zeta = W.zeta(curve.nz, curve.nq)
    assert zeta.coefficient(0).is_zero()
    assert all(e % 2 for e, _ in zeta.keys())
    assert zeta.coefficient(-1).constant_term() == Scalar(1)


def test_zeta1_leading_term(curve):
    assert curve.zeta1.valuation() == -1
    assert curve.zeta1.coefficient(-1) == QSeries.constant(Scalar.lam(-2, -1), curve.nq)


def test_zeta1_prime_relation(curve):
    rhs = (curve.wp + curve.eta1).lam_shift(-2)
    assert curve.zeta1_prime == rhs
    assert curve.zeta1_prime.coefficient(0) == curve.eta1.lam_shift(-2)


def test_zeta1_dot_is_regular(curve):
    assert curve.zeta1_dot.coefficient(-1).is_zero()
    assert curve.zeta1_dot.valuation() >= 0


def test_dots_are_tau_derivatives(curve):
    assert curve.wp_dot == d_tau(curve.wp)
    assert curve.zeta1_ddot == d_tau(curve.zeta1_dot)


@pytest.mark.parametrize("nz,nq", [(8, 4), (20, 16)])
def test_identity_checks(nz, nq):
    res = {r.name: r for r in W.identity_checks(nz, nq)}
    for name, r in res.items():
        assert r.ok, r.line()
    assert res["W2"].status == "ERRATUM"
    assert res["W2-corrected"].passed


def test_lookup_by_name():
    f = W.weierstrass_function("wp_prime", 6, 3)
    assert f.field.coefficient(-3, ONE).constant_term() == Scalar(-2)
    with pytest.raises(KeyError):
        W.weierstrass_function("sigma")


def test_eisenstein_fields_are_z_constant():
    e4 = W.E4(6, 3)
    assert isinstance(e4, SuperField)
    assert e4.keys() == [(0, ONE)]
