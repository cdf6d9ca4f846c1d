"""Laurent expansions at z=0 of the Weierstrass functions of the lattice Z + Z tau.

Coefficients are quasimodular q-series with explicit powers of ``lam``.  The
expansion of wp comes from the recursion implied by the differential equation
``wp'' = 6 wp^2 - g2/2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .scalars import DEFAULT_NQ, QSeries, eisenstein, named_constant
from .superfield import DEFAULT_NZ, ONE, SuperField, d_tau, d_z

__all__ = [
    "WFunction",
    "wp_coefficients",
    "wp",
    "wp_prime",
    "wp_second",
    "wp_dot",
    "wp_dot_prime",
    "zeta",
    "zeta1",
    "zeta1_prime",
    "zeta1_dot",
    "zeta1_dot_prime",
    "zeta1_ddot",
    "weierstrass_function",
    "WEIERSTRASS_NAMES",
    "E2",
    "E4",
    "E6",
    "identity_checks",
]


@dataclass(frozen=True)
class WFunction:
    name: str
    field: SuperField


@lru_cache(maxsize=None)
def wp_coefficients(kmax: int, nq: int = DEFAULT_NQ) -> tuple[QSeries, ...]:
    """Coefficients ``c_1..c_kmax`` of ``wp = z^-2 + sum_k c_k z^(2k)``."""
    g2 = named_constant("g2", nq)
    g3 = named_constant("g3", nq)
    c = [None, g2 * Fraction(1, 20), g3 * Fraction(1, 28)]
    for k in range(3, kmax + 1):
        acc = QSeries({}, nq)
        for m in range(1, k - 1):
            acc = acc + c[m] * c[k - 1 - m]
        c.append(acc * Fraction(3, (2 * k + 3) * (k - 2)))
    return tuple(c[1 : kmax + 1])


@lru_cache(maxsize=None)
def wp(nz: int = DEFAULT_NZ, nq: int = DEFAULT_NQ) -> SuperField:
    """wp(z, tau), known through z^nz."""
    coeffs = {-2: QSeries.constant(1, nq)}
    for k, ck in enumerate(wp_coefficients(max(nz // 2, 0), nq), start=1):
        coeffs[2 * k] = ck
    return SuperField.from_laurent(coeffs, ONE, nz, nq)


@lru_cache(maxsize=None)
def zeta(nz: int = DEFAULT_NZ, nq: int = DEFAULT_NQ) -> SuperField:
    """The odd antiderivative of -wp: ``1/z - sum_k c_k z^(2k+1)/(2k+1)``."""
    coeffs = {-1: QSeries.constant(1, nq)}
    for k, ck in enumerate(wp_coefficients(max(nz // 2, 0), nq), start=1):
        coeffs[2 * k + 1] = ck * Fraction(-1, 2 * k + 1)
    return SuperField.from_laurent(coeffs, ONE, nz + 1, nq)


@lru_cache(maxsize=None)
def zeta1(nz: int = DEFAULT_NZ, nq: int = DEFAULT_NQ) -> SuperField:
    """``(-2 pi i)^-1 (zeta - eta1 z)``: periodic under z -> z+1."""
    eta1 = named_constant("eta1", nq)
    z = SuperField.monomial(1, ONE, 1, nz + 1, nq)
    return (zeta(nz, nq) - z * eta1).lam_shift(-2).scale(-1)


def wp_prime(nz=DEFAULT_NZ, nq=DEFAULT_NQ):
    return d_z(wp(nz + 1, nq))


def wp_second(nz=DEFAULT_NZ, nq=DEFAULT_NQ):
    return d_z(d_z(wp(nz + 2, nq)))


def wp_dot(nz=DEFAULT_NZ, nq=DEFAULT_NQ):
    return d_tau(wp(nz, nq))


def wp_dot_prime(nz=DEFAULT_NZ, nq=DEFAULT_NQ):
    return d_z(d_tau(wp(nz + 1, nq)))


def zeta1_prime(nz=DEFAULT_NZ, nq=DEFAULT_NQ):
    return d_z(zeta1(nz, nq))


def zeta1_dot(nz=DEFAULT_NZ, nq=DEFAULT_NQ):
    return d_tau(zeta1(nz, nq))


def zeta1_dot_prime(nz=DEFAULT_NZ, nq=DEFAULT_NQ):
    return d_z(d_tau(zeta1(nz, nq)))


def zeta1_ddot(nz=DEFAULT_NZ, nq=DEFAULT_NQ):
    return d_tau(d_tau(zeta1(nz, nq)))


def E2(nz=DEFAULT_NZ, nq=DEFAULT_NQ) -> SuperField:
    return SuperField.const(eisenstein(2, nq), nz, nq)


def E4(nz=DEFAULT_NZ, nq=DEFAULT_NQ) -> SuperField:
    return SuperField.const(eisenstein(4, nq), nz, nq)


def E6(nz=DEFAULT_NZ, nq=DEFAULT_NQ) -> SuperField:
    return SuperField.const(eisenstein(6, nq), nz, nq)


WEIERSTRASS_NAMES = {
    "wp": wp,
    "wp_prime": wp_prime,
    "wp_second": wp_second,
    "wp_dot": wp_dot,
    "wp_dot_prime": wp_dot_prime,
    "zeta": zeta,
    "zeta1": zeta1,
    "zeta1_prime": zeta1_prime,
    "zeta1_dot": zeta1_dot,
    "zeta1_dot_prime": zeta1_dot_prime,
    "zeta1_ddot": zeta1_ddot,
}


def weierstrass_function(name: str, nz: int = DEFAULT_NZ, nq: int = DEFAULT_NQ) -> WFunction:
    try:
        build = WEIERSTRASS_NAMES[name]
    except KeyError:
        raise KeyError(f"unknown Weierstrass function {name!r}") from None
    return WFunction(name, build(nz, nq))


def _const(c, nz, nq) -> SuperField:
    return SuperField.const(c, nz, nq)


def identity_checks(nz: int = DEFAULT_NZ, nq: int = DEFAULT_NQ) -> list:
    """The cubic, its derivative, the three identities W1-W3 used by the lifts and
    Ramanujan's relations, each as a :class:`CheckResult`."""
    from .report import check_zero

    p, p1, p2 = wp(nz, nq), wp_prime(nz, nq), wp_second(nz, nq)
    pd, pd1 = wp_dot(nz, nq), wp_dot_prime(nz, nq)
    z1, z1p, z1d = zeta1(nz, nq), zeta1_prime(nz, nq), zeta1_dot(nz, nq)
    g2 = _const(named_constant("g2", nq), nz, nq)
    g3 = _const(named_constant("g3", nq), nz, nq)
    e2, e4, e6 = E2(nz, nq), E4(nz, nq), E6(nz, nq)
    h = Fraction(1, 2)
    out = [
        check_zero("wp-cubic", p1 * p1 - 4 * p * p * p + g2 * p + g3,
                   "(wp')^2 = 4 wp^3 - g2 wp - g3"),
        check_zero("wp-second", p2 - 6 * p * p + g2 * h, "wp'' = 6 wp^2 - g2/2"),
        check_zero("zeta-prime", d_z(zeta(nz, nq)) + p, "zeta' = -wp"),
        check_zero("W1", z1d + z1 * z1p - (p1 * h).lam_shift(-4),
                   "zeta1_dot + zeta1 zeta1' = (2 pi i)^-2 (1/2) wp'"),
        check_zero("W2", pd + z1 * p1 - (2 * p * p + (e2 * Fraction(1, 6)).lam_shift(4)
                                         - g2 * Fraction(1, 3)).lam_shift(-2),
                   "wp_dot + zeta1 wp' = (2 pi i)^-1 (2 wp^2 + (2 pi i)^2 E2/6 - g2/3)",
                   erratum=True),
        check_zero("W2-corrected",
                   pd + z1 * p1 - (2 * p * p + (e2 * p * Fraction(1, 6)).lam_shift(4)
                                   - g2 * Fraction(1, 3)).lam_shift(-2),
                   "wp_dot + zeta1 wp' = (2 pi i)^-1 (2 wp^2 + (2 pi i)^2 (E2/6) wp - g2/3)"),
        check_zero("W3", pd1 + z1 * p2
                   - (3 * (p + (e2 * Fraction(1, 12)).lam_shift(4)) * p1).lam_shift(-2),
                   "wp_dot' + zeta1 wp'' = (2 pi i)^-1 3 (wp + (2 pi i)^2 E2/12) wp'"),
    ]
    # d/dtau = lam^2 q d/dq on constants
    for name, lhs, rhs, stmt in (
        ("ramanujan-E2", e2, (e2 * e2 - e4) * Fraction(1, 12), "dE2 = (E2^2 - E4)/12"),
        ("ramanujan-E4", e4, (e2 * e4 - e6) * Fraction(1, 3), "dE4 = (E2 E4 - E6)/3"),
        ("ramanujan-E6", e6, (e2 * e6 - e4 * e4) * h, "dE6 = (E2 E6 - E4^2)/2"),
    ):
        out.append(check_zero(name, d_tau(lhs) - rhs.lam_shift(2), stmt))
    return out
