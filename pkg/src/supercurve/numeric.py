"""Floating-point evaluation, independent of the symbolic expansions.

Weierstrass functions are summed from their exponential (q-series)
representations in ``u = exp(2 pi i z)``, ``q = exp(2 pi i tau)``.  The sums
converge off the lattice and fastest near the real axis, so by default a
point is first moved to ``|Im z| <= Im tau / 2`` with the quasi-periodicity
laws; the invariance checks sum at the point itself instead.  Quasi-periods are obtained by
Gauss-Legendre quadrature of ``wp`` along the two cycles, so the Legendre
relation is a genuine check and not an identity of the implementation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .report import CheckResult
from .scalars import Verdict

__all__ = [
    "GrassNum",
    "NumConfig",
    "PoleAt",
    "ConvergenceFailure",
    "SegmentThroughPole",
    "LAMBDA",
    "TWO_PI_I",
    "NUM_NAMES",
    "num_eval",
    "eta1_series",
    "quasi_periods",
    "legendre_check",
    "invariance_check",
    "grass_eval",
    "field_eval",
    "period_quadrature",
    "period_matrix",
    "quasi_periodicity_check",
    "cross_check",
    "period_check",
]

TWO_PI_I = 2j * math.pi
# principal branch of the square root of 2 pi i
LAMBDA = math.sqrt(2 * math.pi) * cmath.exp(1j * math.pi / 4)


class PoleAt(ValueError):
    pass


class ConvergenceFailure(ArithmeticError):
    pass


class SegmentThroughPole(ValueError):
    pass


@dataclass(frozen=True)
class NumConfig:
    tau: complex = 0.3 + 1.2j
    cutoff: int | None = None
    nodes: int = 48
    panels: int = 8
    tol: float = 1e-9

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise ValueError("Im tau must be positive")
        if self.nodes < 2 or self.panels < 1:
            raise ValueError("quadrature needs at least 2 nodes and 1 panel")

    @property
    def q(self) -> complex:
        return cmath.exp(TWO_PI_I * self.tau)


class GrassNum:
    """``c1 + c_theta*theta + c_phi*phi + c_thetaphi*theta*phi`` with complex entries."""

    __slots__ = ("c",)

    def __init__(self, c1=0j, ct=0j, cp=0j, ctp=0j):
        self.c = (complex(c1), complex(ct), complex(cp), complex(ctp))

    @classmethod
    def theta(cls):
        return cls(0, 1)

    @classmethod
    def phi(cls):
        return cls(0, 0, 1)

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, GrassNum) else cls(x)

    def __add__(self, o):
        o = GrassNum.coerce(o)
        return GrassNum(*(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return GrassNum(*(-a for a in self.c))

    def __sub__(self, o):
        return self + (-GrassNum.coerce(o))

    def __rsub__(self, o):
        return GrassNum.coerce(o) - self

    def __mul__(self, o):
        o = GrassNum.coerce(o)
        a1, at, ap, atp = self.c
        b1, bt, bp, btp = o.c
        return GrassNum(
            a1 * b1,
            a1 * bt + at * b1,
            a1 * bp + ap * b1,
            a1 * btp + atp * b1 + at * bp - ap * bt,
        )

    def __rmul__(self, o):
        return GrassNum.coerce(o) * self

    def body(self) -> complex:
        return self.c[0]

    def nilpotent(self) -> GrassNum:
        return GrassNum(0, *self.c[1:])

    def is_even(self) -> bool:
        return self.c[1] == 0 and self.c[2] == 0

    def distance(self, o) -> float:
        o = GrassNum.coerce(o)
        return max(abs(a - b) for a, b in zip(self.c, o.c))

    def __repr__(self):
        return "GrassNum(" + ", ".join(f"{a:.12g}" for a in self.c) + ")"


# series kernels ---------------------------------------------------------------


def _reduce(z: complex, tau: complex) -> tuple[complex, int]:
    """``z = zr + m*tau (+ integer)`` with ``|Im zr| <= Im tau / 2``."""
    m = round(z.imag / tau.imag)
    zr = z - m * tau
    zr = zr - round(zr.real)
    return zr, m


def _terms_needed(z: complex, cfg: NumConfig) -> int:
    if cfg.cutoff is not None:
        return cfg.cutoff
    aq = abs(cfg.q)
    grow = math.exp(2 * math.pi * abs(z.imag))
    # terms are bounded by n^3 |q|^n max(|u|, 1/|u|) once |q^n u^(+-1)| < 1/2
    n = max(1, math.ceil(abs(z.imag) / cfg.tau.imag) + 1)
    while aq**n * grow > 0.5:
        n += 1
    while n**3 * aq**n * grow / (1 - aq) ** 4 * 8 > cfg.tol / 10:
        n += 1
        if n > 10000:
            raise ConvergenceFailure("cutoff exceeds 10000 terms")
    return n


def _check_pole(z: complex, tau: complex):
    m = round(z.imag / tau.imag)
    for b in (m - 1, m, m + 1):
        a = round((z - b * tau).real)
        if abs(z - a - b * tau) < 1e-12:
            raise PoleAt(f"z is a lattice point of Z + Z*{tau}")


def _kernels(zr: complex, cfg: NumConfig) -> dict[str, complex]:
    """All functions at ``zr``; the sums converge for every z off the lattice,
    fastest on the strip ``|Im z| <= Im tau / 2``."""
    tau = cfg.tau
    _check_pole(zr, tau)
    q = cfg.q
    u = cmath.exp(TWO_PI_I * zr)
    N = _terms_needed(zr, cfg)

    def k1(w):  # 1/(1-w)
        return 1 / (1 - w)

    def k2(w):  # w/(1-w)^2
        return w / (1 - w) ** 2

    def k3(w):  # w(1+w)/(1-w)^3
        return w * (1 + w) / (1 - w) ** 3

    z1 = k1(u) - 0.5
    wp = 1 / 12 + k2(u)
    wpp = k3(u)
    z1dot = 0j
    z1dotp = 0j
    wpdot = 0j
    last = 0.0
    qn = 1 + 0j
    for n in range(1, N + 1):
        qn *= q
        w, v = qn * u, qn / u
        z1 += k1(w) - k1(v)
        wp += k2(w) + k2(v) - 2 * k2(qn)
        wpp += k3(w) - k3(v)
        z1dot += n * (k2(w) - k2(v))
        z1dotp += n * (k3(w) + k3(v))
        wpdot += n * (k3(w) + k3(v) - 2 * k3(qn))
        last = abs(n * (k3(w) + k3(v)))
    if cfg.cutoff is None and last > cfg.tol:
        raise ConvergenceFailure(f"last series term {last:.3g} exceeds tolerance")
    if cfg.cutoff is not None and last > cfg.tol:
        raise ConvergenceFailure(f"cutoff {N} leaves a term of size {last:.3g}")
    L2 = TWO_PI_I
    wp_v = L2**2 * wp
    e1 = eta1_series(cfg)
    return {
        "wp": wp_v,
        "wp_prime": L2**3 * wpp,
        "wp_dot": L2**3 * wpdot,
        "zeta1": z1,
        "zeta1_prime": (wp_v + e1) / L2,
        "zeta1_second": L2**2 * wpp,
        "zeta1_dot": L2 * z1dot,
        "zeta1_dot_prime": L2**2 * z1dotp,
    }


@lru_cache(maxsize=64)
def _eisenstein2(q: complex, tol: float) -> complex:
    s = 0j
    n = 1
    qn = q
    while True:
        t = n * qn / (1 - qn)
        s += t
        if abs(t) < tol * 1e-3 and n > 2:
            break
        n += 1
        qn *= q
        if n > 100000:
            raise ConvergenceFailure("E2 series did not converge")
    return 1 - 24 * s


def eta1_series(cfg: NumConfig) -> complex:
    """``eta1 = -(2 pi i)^2 E2(q) / 12``."""
    return -(TWO_PI_I**2) * _eisenstein2(cfg.q, cfg.tol) / 12


NUM_NAMES = ("wp", "wp_prime", "wp_dot", "zeta", "zeta1", "zeta1_prime",
             "zeta1_dot", "zeta1_dot_prime", "zeta1_second")


def num_eval(name: str, z: complex, cfg: NumConfig = NumConfig(), reduce: bool = True) -> complex:
    """Value at ``(z, tau)``; tau-derivatives are taken at fixed z.

    With ``reduce=False`` the sums are evaluated at z itself, which avoids
    using the transformation laws (slower away from the real axis).
    """
    if name not in NUM_NAMES:
        raise KeyError(f"unknown numeric function {name!r}")
    z = complex(z)
    zr, m = _reduce(z, cfg.tau) if reduce else (z, 0)
    k = _kernels(zr, cfg)
    # shifting by m*tau: zeta1 -> +m, dotted functions pick up -m * z-derivative
    if name == "zeta":
        return eta1_series(cfg) * z - TWO_PI_I * (k["zeta1"] + m)
    if name == "zeta1":
        return k["zeta1"] + m
    if name == "zeta1_dot":
        return k["zeta1_dot"] - m * k["zeta1_prime"]
    if name == "zeta1_dot_prime":
        return k["zeta1_dot_prime"] - m * k["zeta1_second"]
    if name == "wp_dot":
        return k["wp_dot"] - m * k["wp_prime"]
    return k[name]


# Grassmann-valued functions -------------------------------------------------------


def grass_eval(name: str, z: GrassNum, cfg: NumConfig, reduce: bool = False) -> GrassNum:
    """``F(z0 + n) = F(z0) + n F'(z0)`` for even z with nilpotent part n."""
    if not z.is_even():
        raise ValueError("z must be an even Grassmann number")
    deriv = {"zeta1": "zeta1_prime", "zeta1_prime": "zeta1_second",
             "zeta1_dot": "zeta1_dot_prime", "wp": "wp_prime"}
    z0 = z.body()
    val = GrassNum(num_eval(name, z0, cfg, reduce))
    n = z.nilpotent()
    if n.c[3] == 0:
        return val
    return val + n * num_eval(deriv[name], z0, cfg, reduce)


def _field(name: str, z: GrassNum, theta: GrassNum, phi: GrassNum, cfg: NumConfig) -> GrassNum:
    if name == "Psi1":
        return theta - phi * grass_eval("zeta1", z, cfg)
    if name == "Psi2":
        return phi * grass_eval("zeta1_dot", z, cfg) + theta * grass_eval("zeta1_prime", z, cfg)
    if name == "theta":
        return theta
    raise KeyError(f"unknown function {name!r}")


def field_eval(name: str, z: complex, cfg: NumConfig = NumConfig()) -> GrassNum:
    """``Psi1`` or ``Psi2`` at the point ``(z, theta, phi)`` as a Grassmann number."""
    return _field(name, GrassNum(z), GrassNum.theta(), GrassNum.phi(), cfg)


def invariance_check(name: str, z0: complex, cfg: NumConfig = NumConfig()) -> list[CheckResult]:
    """Compare ``F(z, theta)`` with ``F(z+1, theta)`` and ``F(z+tau+theta*phi, theta+phi)``."""
    th, ph = GrassNum.theta(), GrassNum.phi()
    base = _field(name, GrassNum(z0), th, ph, cfg)
    out = []
    for label, z1, th1 in (
        ("z+1", GrassNum(z0 + 1), th),
        ("z+tau+theta*phi", GrassNum(z0 + cfg.tau) + th * ph, th + ph),
    ):
        moved = _field(name, z1, th1, ph, cfg)
        err = base.distance(moved)
        out.append(CheckResult(
            f"invariance-{name}-{label}", Verdict.EQUAL if err <= cfg.tol else Verdict.UNEQUAL,
            f"{name} invariant under (z, theta) -> ({label}, ...)",
            notes=[f"max component error {err:.3e}"]))
    return out


# quadrature -------------------------------------------------------------------------


@lru_cache(maxsize=16)
def _gauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _segment_distance(a: complex, b: complex, tau: complex) -> float:
    best = math.inf
    span = int(abs(b - a) / min(1.0, tau.imag)) + 2
    for m in range(-span - 2, span + 3):
        for n in range(-span - 2, span + 3):
            p = m + n * tau
            d = b - a
            t = ((p - a) * d.conjugate()).real / abs(d) ** 2
            t = min(1.0, max(0.0, t))
            best = min(best, abs(a + t * d - p))
    return best


def _integrate(f, a: complex, b: complex, cfg: NumConfig) -> complex:
    if _segment_distance(a, b, cfg.tau) < 0.05:
        raise SegmentThroughPole("integration segment passes too close to a lattice point")
    x, w = _gauss(cfg.nodes)
    total = 0j
    d = (b - a) / cfg.panels
    for k in range(cfg.panels):
        lo = a + k * d
        mid, half = lo + d / 2, d / 2
        total += half * sum(wi * f(mid + half * xi) for xi, wi in zip(x, w))
    return total


def _default_base(cfg: NumConfig) -> complex:
    return -0.5 - 0.5 * cfg.tau


def quasi_periods(cfg: NumConfig = NumConfig(), z_base: complex | None = None) -> tuple[complex, complex]:
    """``eta_i = zeta(z + w_i) - zeta(z) = -integral of wp`` over the cycles ``w = 1, tau``."""
    zb = _default_base(cfg) if z_base is None else z_base
    wp = lambda z: num_eval("wp", z, cfg)
    return -_integrate(wp, zb, zb + 1, cfg), -_integrate(wp, zb, zb + cfg.tau, cfg)


def period_quadrature(z_base: complex | None = None, cfg: NumConfig = NumConfig()):
    """``(int_a dz, int_b dz, int_a zeta1' dz, int_b zeta1' dz)``."""
    zb = _default_base(cfg) if z_base is None else z_base
    one = lambda z: 1.0
    zp = lambda z: num_eval("zeta1_prime", z, cfg)
    a, b = zb + 1, zb + cfg.tau
    return (_integrate(one, zb, a, cfg), _integrate(one, zb, b, cfg),
            _integrate(zp, zb, a, cfg), _integrate(zp, zb, b, cfg))


def period_matrix(cfg: NumConfig = NumConfig(), z_base: complex | None = None):
    """Periods of ``e0 = (1 - tau zeta1') dz`` and ``f0 = zeta1' dz`` on (alpha, beta)."""
    ia, ib, za, zb_ = period_quadrature(z_base, cfg)
    t = cfg.tau
    return [[ia - t * za, ib - t * zb_], [za, zb_]]


def legendre_check(cfg: NumConfig = NumConfig()) -> list[CheckResult]:
    e1, e2 = quasi_periods(cfg)
    lhs = cfg.tau * e1 - e2
    err = abs(lhs - TWO_PI_I)
    err_e2 = abs(e1 - eta1_series(cfg))
    return [
        CheckResult("legendre", Verdict.EQUAL if err <= cfg.tol else Verdict.UNEQUAL,
                    "tau*eta1 - eta2 = 2 pi i", notes=[f"tau={cfg.tau}", f"error {err:.3e}"]),
        CheckResult("eta1-vs-E2", Verdict.EQUAL if err_e2 <= cfg.tol else Verdict.UNEQUAL,
                    "quadrature eta1 = -(2 pi i)^2 E2/12", notes=[f"error {err_e2:.3e}"]),
    ]


def quasi_periodicity_check(z0: complex, cfg: NumConfig = NumConfig()) -> list[CheckResult]:
    """Transformation laws, with both sides summed directly (no reduction)."""
    t = cfg.tau
    ev = lambda name, z: num_eval(name, z, cfg, reduce=False)
    vals = {
        "zeta1(z+1) - zeta1(z)": ev("zeta1", z0 + 1) - ev("zeta1", z0),
        "zeta1(z+tau) - zeta1(z) - 1": ev("zeta1", z0 + t) - ev("zeta1", z0) - 1,
        "zeta1_dot(z+tau) - zeta1_dot(z) + zeta1'(z)":
            ev("zeta1_dot", z0 + t) - ev("zeta1_dot", z0) + ev("zeta1_prime", z0),
    }
    return [CheckResult(f"quasi-periodicity {k}", Verdict.EQUAL if abs(v) <= cfg.tol else Verdict.UNEQUAL,
                        f"{k} = 0", notes=[f"error {abs(v):.3e}"]) for k, v in vals.items()]


def cross_check(curve, z0: complex, cfg: NumConfig, names=("wp", "zeta1")) -> list[CheckResult]:
    """Truncated symbolic expansions evaluated at ``z0`` against :func:`num_eval`."""
    from . import weierstrass as W

    out = []
    for name in names:
        field = W.weierstrass_function(name, curve.nz, curve.nq).field
        sym = field.evaluate(z0, LAMBDA, cfg.q)[0]
        num = num_eval(name, z0, cfg)
        err = abs(sym - num)
        out.append(CheckResult(f"cross-{name}", Verdict.EQUAL if err <= cfg.tol else Verdict.UNEQUAL,
                               f"symbolic {name} agrees with numeric evaluation",
                               notes=[f"z={z0}", f"tau={cfg.tau}", f"error {err:.3e}"]))
    return out


def period_check(cfg: NumConfig = NumConfig(), z_base: complex | None = None,
                 tol: float | None = None) -> CheckResult:
    """Periods of dz and zeta1' dz over (alpha, beta) are (1, tau, 0, 1)."""
    tol = cfg.tol if tol is None else tol
    got = period_quadrature(z_base, cfg)
    want = (1, cfg.tau, 0, 1)
    err = max(abs(g - w) for g, w in zip(got, want))
    return CheckResult("periods", Verdict.EQUAL if err <= tol else Verdict.UNEQUAL,
                       "(int_a dz, int_b dz, int_a zeta1' dz, int_b zeta1' dz) = (1, tau, 0, 1)",
                       notes=[f"tau={cfg.tau}", f"error {err:.3e}"])
