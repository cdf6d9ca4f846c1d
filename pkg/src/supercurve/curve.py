"""Generating functions of the standard genus-1 supercurve with odd spin structure.

:class:`Curve` bundles the truncation orders with lazily built expansions of
R, Psi1, Psi2 and the algebraic generators x, y, psi, together with the
rescaled derivation ``Dt`` (written D-tilde in formulas).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property

from math import factorial

from .report import CheckResult, check_expansion, check_zero
from .scalars import DEFAULT_NQ, QSeries, Scalar, Verdict, eisenstein, named_constant
from .superfield import DEFAULT_NZ, ONE, PHI, THETA, SuperField, D
from . import weierstrass as W

__all__ = [
    "Curve",
    "DepthExceeded",
    "RELATIONS",
    "NAMED_FIELDS",
    "DEFAULT_DEPTH",
]

DEFAULT_DEPTH = 8

NAMED_FIELDS = ("R", "Psi1", "Psi2", "Psi2tilde", "x", "y", "psi", "phitilde")


class DepthExceeded(ValueError):
    pass


class Curve:
    """Expansions at the puncture z=0, exact in lam and q to the given orders."""

    def __init__(self, nz: int = DEFAULT_NZ, nq: int = DEFAULT_NQ, depth: int = DEFAULT_DEPTH):
        if nz < 1 or nq < 0:
            raise ValueError("orders must be positive")
        self.nz = nz
        self.nq = nq
        self.depth = depth
        self._powers: dict[int, SuperField] = {}

    def __repr__(self):
        return f"Curve(nz={self.nz}, nq={self.nq}, depth={self.depth})"

    # constants ------------------------------------------------------------

    @cached_property
    def one(self) -> SuperField:
        return SuperField.const(1, self.nz + 1, self.nq)

    @cached_property
    def theta(self) -> SuperField:
        return SuperField.monomial(0, THETA, 1, self.nz + 1, self.nq)

    @cached_property
    def phi(self) -> SuperField:
        return SuperField.monomial(0, PHI, 1, self.nz + 1, self.nq)

    @cached_property
    def theta_phi(self) -> SuperField:
        return self.theta * self.phi

    def const(self, c) -> SuperField:
        return SuperField.const(c, self.nz + 1, self.nq)

    @cached_property
    def E2(self) -> QSeries:
        return eisenstein(2, self.nq)

    @cached_property
    def E4(self) -> QSeries:
        return eisenstein(4, self.nq)

    @cached_property
    def E6(self) -> QSeries:
        return eisenstein(6, self.nq)

    @cached_property
    def eta1(self) -> QSeries:
        return named_constant("eta1", self.nq)

    @cached_property
    def eta1_dot(self) -> QSeries:
        return named_constant("eta1_dot", self.nq)

    @cached_property
    def g2(self) -> QSeries:
        return named_constant("g2", self.nq)

    # Weierstrass pieces ---------------------------------------------------

    @cached_property
    def wp(self):
        return W.wp(self.nz, self.nq)

    @cached_property
    def wp_prime(self):
        return W.wp_prime(self.nz, self.nq)

    @cached_property
    def wp_dot(self):
        return W.wp_dot(self.nz, self.nq)

    @cached_property
    def zeta1(self):
        return W.zeta1(self.nz, self.nq)

    @cached_property
    def zeta1_prime(self):
        return W.zeta1_prime(self.nz, self.nq)

    @cached_property
    def zeta1_dot(self):
        return W.zeta1_dot(self.nz, self.nq)

    @cached_property
    def zeta1_dot_prime(self):
        return W.zeta1_dot_prime(self.nz, self.nq)

    @cached_property
    def zeta1_ddot(self):
        return W.zeta1_ddot(self.nz, self.nq)

    # generating functions -------------------------------------------------

    @cached_property
    def R(self) -> SuperField:
        """``wp(z, tau + theta*phi) = wp + theta*phi*wp_dot``."""
        return self.wp + self.theta_phi * self.wp_dot

    @cached_property
    def Psi1(self) -> SuperField:
        return self.theta - self.phi * self.zeta1

    @cached_property
    def Psi2(self) -> SuperField:
        return self.phi * self.zeta1_dot + self.theta * self.zeta1_prime

    @cached_property
    def psi(self) -> SuperField:
        return self.Psi1.lam_shift(1)

    @cached_property
    def phitilde(self) -> SuperField:
        return self.phi.lam_shift(1)

    @cached_property
    def Psi2tilde(self) -> SuperField:
        return self.Psi2.lam_shift(-1)

    def _twist(self, frac: Fraction) -> SuperField:
        """``1 - lam^2 * frac * E2 * theta*phi``."""
        return self.one - self.theta_phi * self.E2.lam_shift(2) * frac

    @cached_property
    def x(self) -> SuperField:
        return (self._twist(Fraction(1, 6)) * self.R).lam_shift(-4)

    @cached_property
    def y(self) -> SuperField:
        # built from D^2 R = d/dz R on purpose: D^2 = d/dz is load-bearing here
        return (self._twist(Fraction(1, 4)) * self.D_power_R(2)).lam_shift(-6)

    @cached_property
    def _dt_prefactor(self) -> SuperField:
        return self._twist(Fraction(1, 12)).lam_shift(-1)

    def Dt(self, f: SuperField) -> SuperField:
        """``lam^-1 (1 - lam^2 (E2/12) theta phi) D``."""
        return self._dt_prefactor * D(f)

    def field(self, name: str) -> SuperField:
        if name not in NAMED_FIELDS:
            raise KeyError(f"unknown named field {name!r}")
        return getattr(self, name)

    # basis elements -------------------------------------------------------

    def D_power_R(self, n: int) -> SuperField:
        if n < 0:
            raise ValueError("n must be >= 0")
        if n not in self._powers:
            self._powers[n] = self.R if n == 0 else D(self.D_power_R(n - 1))
        return self._powers[n]

    def basis_element(self, label: str) -> SuperField:
        """Elements of the two bases, named like ``1``, ``Psi1``, ``Psi2``,
        ``D^3R``, ``x^2``, ``y*x^2``, ``x^2*psi``, ``y*x^2*psi``."""
        label = label.replace(" ", "")
        if label == "1":
            return self.one
        if label in ("Psi1", "Psi2"):
            return getattr(self, label)
        m = re.fullmatch(r"(D\^?(\d*))?R", label)
        if m:
            n = 0 if not m.group(1) else int(m.group(2)) if m.group(2) else 1
            if n > self.depth:
                raise DepthExceeded(f"D^{n}R exceeds configured depth {self.depth}")
            return self.D_power_R(n)
        m = re.fullmatch(r"(y\*?)?(?:x\^?(\d*))?(\*?psi)?", label)
        if m and label:
            with_y, n, with_psi = m.group(1), m.group(2), m.group(3)
            if "x" in label:
                n = int(n) if n else 1
            else:
                n = 0
            if n > self.depth:
                raise DepthExceeded(f"x^{n} exceeds configured depth {self.depth}")
            out = self.x**n if n else self.one
            if with_y:
                out = self.y * out
            if with_psi:
                out = out * self.psi
            return out
        raise KeyError(f"unknown basis element {label!r}")

    def fun_basis(self) -> list[tuple[str, SuperField]]:
        """1, Psi1, Psi2, D^n R for n <= depth."""
        out = [("1", self.one), ("Psi1", self.Psi1), ("Psi2", self.Psi2)]
        out += [(f"D^{n}R", self.D_power_R(n)) for n in range(self.depth + 1)]
        return out

    def algebra_basis(self, nmax: int | None = None) -> list[tuple[str, SuperField]]:
        """x^n, y x^n, x^n psi, y x^n psi for n <= nmax."""
        nmax = self.depth // 2 if nmax is None else nmax
        out = [("x^0", self.one), ("y*x^0", self.y), ("x^0*psi", self.psi),
               ("y*x^0*psi", self.y * self.psi)]
        xn = self.x
        for n in range(1, nmax + 1):
            out.append((f"x^{n}", xn))
            out.append((f"y*x^{n}", self.y * xn))
            out.append((f"x^{n}*psi", xn * self.psi))
            out.append((f"y*x^{n}*psi", self.y * xn * self.psi))
            xn = xn * self.x
        return out

    # presentation relations -----------------------------------------------

    def relation_difference(self, rel_id: str) -> SuperField:
        return RELATIONS[rel_id][1](self)

    def check_relation(self, rel_id: str) -> CheckResult:
        statement, build, erratum = RELATIONS[rel_id]
        res = check_zero(rel_id, build(self), statement, erratum=erratum)
        if res.verdict is Verdict.EQUAL and res.z_order is not None and res.z_order < 0:
            res.verdict = Verdict.INSUFFICIENT
        return res

    def expansion_checks(self) -> list[CheckResult]:
        """Principal parts of Psi1, Psi2 and D^n R at the puncture."""
        lam = Scalar.lam
        out = [
            check_expansion("lead-Psi1", self.Psi1,
                            {(0, THETA): 1, (-1, PHI): lam(-2)}, 1,
                            "Psi1 = theta + (2 pi i)^-1 phi/z + O(z)"),
            check_expansion("lead-Psi2", self.Psi2, {(-2, THETA): lam(2)}, 0,
                            "Psi2 = (2 pi i) theta/z^2 + O(1)", erratum=True),
            check_expansion("lead-Psi2-corrected", self.Psi2, {(-2, THETA): lam(-2)}, 0,
                            "Psi2 = (2 pi i)^-1 theta/z^2 + O(1)"),
        ]
        for n in range(self.depth + 1):
            m, odd = divmod(n, 2)
            if odd:
                expected = {(-m - 3, THETA): (-1) ** (m + 1) * factorial(m + 2)}
                stmt = f"D^{n}R = {(-1) ** (m + 1) * factorial(m + 2)} theta/z^{m + 3} + O(1)"
            else:
                expected = {(-m - 2, ONE): (-1) ** m * factorial(m + 1)}
                stmt = f"D^{n}R = {(-1) ** m * factorial(m + 1)}/z^{m + 2} + O(1)"
            out.append(check_expansion(f"lead-D^{n}R", self.D_power_R(n), expected, 0, stmt))
        return out


def _F(a, b=1):
    return Fraction(a, b)


def _dpsi2_literal(c: Curve):
    return D(c.Psi2) - (c.R + c.eta1).lam_shift(-2)


def _dpsi2_corrected(c: Curve):
    # eta1 evaluated at tau + theta*phi, like R
    return D(c.Psi2) - (c.R + c.eta1 + c.theta_phi * c.eta1_dot).lam_shift(-2)


def _cubic(c: Curve):
    x, y, psi, pt = c.x, c.y, c.psi, c.phitilde
    pp = psi * pt
    return (y * y - 4 * x * x * x
            + (c.one * c.E4 - pp * c.E6 * _F(1, 3)) * x * _F(1, 12)
            - (c.one * c.E6 - pp * (c.E4 * c.E4) * _F(1, 2)) * _F(1, 216))


# id -> (displayed statement, lhs - rhs builder, known misprint)
RELATIONS = {
    "DPsi1": ("D(Psi1) = 1 + phi*Psi2",
              lambda c: D(c.Psi1) - 1 - c.phi * c.Psi2, False),
    "DPsi2": ("D(Psi2) = (2 pi i)^-1 (R + eta1(tau))", _dpsi2_literal, True),
    "DPsi2_corrected": ("D(Psi2) = (2 pi i)^-1 (R + eta1(tau + theta*phi))",
                        _dpsi2_corrected, False),
    "Psi2eq": ("Psi2~ = x psi + (1/2) phi~ y - (E2/12) psi",
               lambda c: c.Psi2tilde - (c.x * c.psi + c.phitilde * c.y * _F(1, 2)
                                        - c.psi * c.E2 * _F(1, 12)), False),
    "DRx": ("D~(x) = y psi + phi~ (2 x^2 - E4/36)",
            lambda c: c.Dt(c.x) - (c.y * c.psi
                                   + c.phitilde * (2 * c.x * c.x - c.E4 * _F(1, 36))), False),
    "D3Ry": ("D~(y) = (6 x^2 - E4/24) psi + 3 phi~ x y",
             lambda c: c.Dt(c.y) - ((6 * c.x * c.x - c.E4 * _F(1, 24)) * c.psi
                                    + 3 * c.phitilde * c.x * c.y), False),
    "Dpsi": ("D~(psi) = 1 + phi~ psi x",
             lambda c: c.Dt(c.psi) - (1 + c.phitilde * c.psi * c.x), False),
    "cubic": ("y^2 - 4x^3 + (1/12)(E4 - (E6/3) psi phi~) x - (1/216)(E6 - (E4^2/2) psi phi~) = 0",
              _cubic, False),
}
