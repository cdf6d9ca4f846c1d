"""Lifts of the base vector fields, their bracket identities, and the chart at infinity.

``D_tau`` and ``D_phi`` lift d/dtau and d/dphi to vector fields preserving the
distribution spanned by ``D``.  Each lift has two written forms: one in terms
of ``D^2 = d/dz`` and ``D``, and one in coordinates.  Printed formulas that
do not survive exact expansion are checked as written (flagged ``erratum``)
next to the corrected statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .report import CheckResult, check_expansion, check_zero
from .scalars import QSeries, Scalar, Verdict
from .superfield import ONE, PHI, THETA, THETA_PHI, SuperField, D, d_phi, d_tau, d_theta, d_z
from .cohomology import DepthExceeded, NotInSpan, decompose, quasimodular_form, quasimodular_verdict

__all__ = [
    "VectorField",
    "build_lift",
    "LIFT_FORMS",
    "lift_forms_check",
    "commutator_check",
    "closure_check",
    "closure_reexpression",
    "blowup_expansions",
    "blowup_check",
    "sbar_check",
    "coordinate_change_check",
    "probe_functions",
]

_H = Fraction(1, 2)


@dataclass
class VectorField:
    """``a_tau*d_tau + a_phi*d_phi + a_z*d_z + a_theta*d_theta``, coefficients on the left."""

    a_tau: SuperField
    a_phi: SuperField
    a_z: SuperField
    a_theta: SuperField
    parity: str = "even"

    @classmethod
    def from_operator_form(cls, a_tau, a_phi, a_dd, a_d, parity="even") -> VectorField:
        """``a_tau d_tau + a_phi d_phi + a_dd D^2 + a_d D`` with ``D = d_theta + theta d_z``."""
        theta = SuperField.monomial(0, THETA, 1, a_d.zorder, a_d.qorder)
        return cls(a_tau, a_phi, a_dd + a_d * theta, a_d, parity)

    def __call__(self, f: SuperField) -> SuperField:
        out = self.a_z * d_z(f) + self.a_theta * d_theta(f)
        if not self.a_tau.is_zero():
            out = out + self.a_tau * d_tau(f)
        if not self.a_phi.is_zero():
            out = out + self.a_phi * d_phi(f)
        return out

    def components(self) -> dict[str, SuperField]:
        return {"tau": self.a_tau, "phi": self.a_phi, "z": self.a_z, "theta": self.a_theta}


def _zero(c):
    return SuperField.zero(c.nz + 1, c.nq)


LIFT_FORMS = ("coordinate", "operator", "operator_literal")


def build_lift(name: str, curve, form: str = "coordinate") -> VectorField:
    """``D_tau`` or ``D_phi`` in the requested written form.

    ``operator_literal`` is the D^2/D form exactly as printed; for ``D_phi``
    its D^2 coefficient ``phi*(zeta1^2 - 2 theta zeta1)`` disagrees with the
    coordinate form, whose consistent operator version is
    ``phi*zeta1^2 - 2 theta zeta1``.
    """
    c = curve
    th, ph, tp = c.theta, c.phi, c.theta_phi
    z1, z1p, z1d = c.zeta1, c.zeta1_prime, c.zeta1_dot
    one, zero = c.one, _zero(c)
    if name in ("D_tau", "Dtau"):
        if form == "coordinate":
            return VectorField(one, zero, z1 + tp * z1d * _H, (th * z1p + ph * z1d) * _H)
        if form in ("operator", "operator_literal"):
            return VectorField.from_operator_form(one, zero, z1 + tp * z1d, c.Psi2 * _H)
    elif name in ("D_phi", "Dphi"):
        b = z1 - tp * z1 * z1p
        if form == "coordinate":
            return VectorField(zero, one, ph * z1 * z1 - th * z1, b, "odd")
        if form == "operator":
            return VectorField.from_operator_form(zero, one, ph * z1 * z1 - 2 * th * z1, b, "odd")
        if form == "operator_literal":
            return VectorField.from_operator_form(zero, one, ph * (z1 * z1 - 2 * th * z1), b, "odd")
    else:
        raise KeyError(f"unknown lift {name!r}")
    raise KeyError(f"unknown form {form!r}")


def probe_functions(curve) -> list[tuple[str, SuperField]]:
    c = curve
    z = SuperField.monomial(1, ONE, 1, c.nz + 1, c.nq)
    return [
        ("1", c.one), ("z", z), ("theta", c.theta), ("R", c.R), ("Psi1", c.Psi1),
        ("Psi2", c.Psi2), ("x*psi", c.x * c.psi), ("theta*z^-1", c.theta * z.inverse()),
        ("R*Psi2", c.R * c.Psi2),
    ]


def _all_zero(name, statement, diffs, erratum=False) -> CheckResult:
    """Combine several differences into one verdict; report the first failure."""
    worst = None
    for label, diff in diffs:
        r = check_zero(name, diff, statement, erratum=erratum)
        if r.verdict is not Verdict.EQUAL:
            r.notes.append(f"fails on {label}")
            return r
        worst = r
    return worst if worst is not None else CheckResult(name, Verdict.EQUAL, statement, erratum=erratum)


def lift_forms_check(curve) -> list[CheckResult]:
    tests = probe_functions(curve)
    out = []
    for name in ("D_tau", "D_phi"):
        coord = build_lift(name, curve, "coordinate")
        for form, erratum in (("operator_literal", name == "D_phi"), ("operator", False)):
            if name == "D_tau" and form == "operator":
                continue
            op = build_lift(name, curve, form)
            out.append(_all_zero(
                f"{name}-forms-{form.replace('_', '-')}",
                f"{name}: {form.replace('_', ' ')} form equals coordinate form",
                [(lbl, op(f) - coord(f)) for lbl, f in tests], erratum))
    return out


def commutator_check(curve) -> list[CheckResult]:
    c = curve
    Dt = build_lift("D_tau", c)
    Dp = build_lift("D_phi", c)
    tests = probe_functions(c)
    dpsi2 = D(c.Psi2)
    return [
        _all_zero("comm-tau", "D_tau D - D D_tau = -(1/2) D(Psi2) D",
                  [(l, Dt(D(f)) - D(Dt(f)) + dpsi2 * D(f) * _H) for l, f in tests]),
        _all_zero("comm-phi", "D_phi D + D D_phi = zeta1' Psi1 D  (psi_1 read as Psi1)",
                  [(l, Dp(D(f)) + D(Dp(f)) - c.zeta1_prime * c.Psi1 * D(f)) for l, f in tests]),
        check_zero("comm-phi-rhs", c.zeta1_prime * c.Psi1
                   - (c.x - c.E2.lam_shift(4) * Fraction(1, 12)).lam_shift(-2) * c.Psi1,
                   "zeta1' Psi1 = (2 pi i)^-1 (x - (2 pi i)^2 E2/12) Psi1", erratum=True),
        check_zero("comm-phi-rhs-corrected", c.zeta1_prime * c.Psi1
                   - (c.x - c.E2 * Fraction(1, 12)).lam_shift(2) * c.Psi1,
                   "zeta1' Psi1 = (2 pi i)(x - E2/12) Psi1"),
    ]


def _closure_items(c):
    """(id, statement, lhs, rhs, erratum)."""
    Dt = build_lift("D_tau", c)
    Dp = build_lift("D_phi", c)
    D2R, D3R = c.D_power_R(2), c.D_power_R(3)
    e2 = c.E2.lam_shift(4) * Fraction(1, 12)
    dp_psi2_rhs = lambda odd: D2R.lam_shift(-4) * _H * (
        1 - (odd * c.phi * (c.R + e2)).lam_shift(-2) * 3)
    return [
        ("Dtau-psi", "D_tau(psi) = (1/2) Psi2 - (2 pi i)^-1 phi (1/2) D^2R",
         Dt(c.psi), c.Psi2 * _H - (c.phi * D2R).lam_shift(-2) * _H, True),
        ("Dtau-psi-corrected", "D_tau(psi) = (2 pi i)^(1/2) [(1/2) Psi2 - (2 pi i)^-2 phi (1/2) D^2R]",
         Dt(c.psi), (c.Psi2 * _H - (c.phi * D2R).lam_shift(-4) * _H).lam_shift(1), False),
        ("Dtau-Psi2", "D_tau(Psi2) = (2 pi i)^-2 (1/2) D^3R - (2 pi i)^-1 (1/2)(wp - (2 pi i)^2 E2/12) Psi2",
         Dt(c.Psi2), D3R.lam_shift(-4) * _H - ((c.wp - e2) * c.Psi2).lam_shift(-2) * _H, False),
        ("Dphi-psi", "D_phi(psi) = 0", Dp(c.psi), _zero(c), False),
        ("Dphi-Psi2", "D_phi(Psi2) = (2 pi i)^-2 (1/2) D^2R [1 - (2 pi i)^-1 3 psi phi (R + (2 pi i)^2 E2/12)]",
         Dp(c.Psi2), dp_psi2_rhs(c.psi), True),
        ("Dphi-Psi2-corrected", "D_phi(Psi2) = (2 pi i)^-2 (1/2) D^2R [1 - (2 pi i)^-1 3 Psi1 phi (R + (2 pi i)^2 E2/12)]",
         Dp(c.Psi2), dp_psi2_rhs(c.Psi1), False),
    ]


def closure_check(curve) -> list[CheckResult]:
    return [check_zero(i, lhs - rhs, st, erratum=err)
            for i, st, lhs, rhs, err in _closure_items(curve)]


def closure_reexpression(curve) -> list[CheckResult]:
    """Write D_tau(psi), D_tau(Psi2~), D_phi(psi), D_phi(Psi2~) on the basis
    ``x^n, y x^n, x^n psi, y x^n psi`` and confirm every coefficient is a
    polynomial in E2, E4, E6 (with lambda powers and phi)."""
    c = curve
    Dt = build_lift("D_tau", c)
    Dp = build_lift("D_phi", c)
    out = []
    for name, val in (("D_tau(psi)", Dt(c.psi)), ("D_tau(Psi2~)", Dt(c.Psi2tilde)),
                      ("D_phi(psi)", Dp(c.psi)), ("D_phi(Psi2~)", Dp(c.Psi2tilde))):
        cid = f"closure-in-A {name}"
        try:
            dec = decompose(val, c, "algebra")
        except (NotInSpan, DepthExceeded) as exc:
            out.append(CheckResult(cid, Verdict.UNEQUAL, f"{name} lies in A", notes=[str(exc)]))
            continue
        notes = []
        verdict = Verdict.EQUAL
        for label, coeff in dec.nonzero().items():
            for part, series in (("", coeff.body), ("phi*", coeff.odd)):
                if series.is_zero():
                    continue
                qm = quasimodular_form(series)
                if qm is not None:
                    notes.append(f"{label}: {part}{_format_qm(qm)}")
                elif quasimodular_verdict(series) is Verdict.INSUFFICIENT:
                    verdict = verdict if verdict is Verdict.UNEQUAL else Verdict.INSUFFICIENT
                    notes.append(f"coefficient {part}{label} undecided at this q-order")
                else:
                    verdict = Verdict.UNEQUAL
                    notes.append(f"coefficient {part}{label} is not quasimodular")
        out.append(CheckResult(cid, verdict,
                               f"{name} is a polynomial in x, y, psi over Q", notes=notes))
    return out


def _format_qm(qm) -> str:
    parts = []
    for lam, poly in sorted(qm.items()):
        for (a, b, cc), v in sorted(poly.items()):
            mono = "*".join(f"E{k}^{p}" if p > 1 else f"E{k}"
                            for k, p in ((2, a), (4, b), (6, cc)) if p) or "1"
            parts.append(f"{v}*lambda^{lam}*{mono}")
    return "(" + " + ".join(parts) + ")" if parts else "0"


# chart at infinity ----------------------------------------------------------


def blowup_expansions(curve) -> dict[str, SuperField]:
    c = curve
    inv_y = c.y.inverse()
    phi_prime = c.psi * inv_y + 2 * c.phitilde * c.x * c.x * inv_y * inv_y
    return {
        "1/y": inv_y,
        "x/y": c.x * inv_y,
        "psi/y": c.psi * inv_y,
        "phi'": phi_prime,
        "phi'*y": phi_prime * c.y,
    }


def blowup_check(curve) -> list[CheckResult]:
    c = curve
    ex = blowup_expansions(c)
    nq = c.nq
    E2, E4 = c.E2, c.E4
    L = lambda k, v=1: QSeries.constant(Scalar.lam(k, v), nq)
    out = [
        check_expansion("blowup-1/y", ex["1/y"], {(3, ONE): L(6, Fraction(-1, 2))}, 7,
                "1/y = -((2 pi i)^3/2) z^3 (1 + O(z^4))", strict_keys=(ONE,)),
        check_expansion("blowup-1/y-thetaphi", ex["1/y"],
                {(3, ONE): L(6, Fraction(-1, 2)),
                 (3, THETA_PHI): (E4 * L(8, Fraction(1, 8)))}, 7,
                "1/y = -((2 pi i)^3/2) z^3 (1 + O(z^4)) (1 - (2 pi i)(E4/4) theta phi)",
                erratum=True),
        check_expansion("blowup-1/y-thetaphi-corrected", ex["1/y"],
                {(3, ONE): L(6, Fraction(-1, 2)),
                 (3, THETA_PHI): (E2 * L(8, Fraction(-1, 8)))}, 7,
                "1/y = -((2 pi i)^3/2) z^3 (1 + O(z^4)) (1 + (2 pi i)(E2/4) theta phi)"),
        check_expansion("blowup-x/y", ex["x/y"], {(1, ONE): L(2, Fraction(-1, 2))}, 5,
                "x/y = -((2 pi i)/2) z (1 + O(z^4))", strict_keys=(ONE,)),
        check_expansion("blowup-x/y-coordchange", ex["x/y"], {(1, ONE): L(2, -1)}, 2,
                "x/y = -2 pi i z + ...", strict_keys=(ONE,), erratum=True),
        check_expansion("blowup-x/y-thetaphi", ex["x/y"],
                {(1, ONE): L(2, Fraction(-1, 2)),
                 (1, THETA_PHI): (E2 * L(4, Fraction(1, 24)))}, 5,
                "x/y = -((2 pi i)/2) z (1 + O(z^4)) (1 - (2 pi i)(E2/12) theta phi)",
                erratum=True),
        check_expansion("blowup-x/y-thetaphi-corrected", ex["x/y"],
                {(1, ONE): L(2, Fraction(-1, 2)),
                 (1, THETA_PHI): (E2 * L(4, Fraction(-1, 24)))}, 5,
                "x/y = -((2 pi i)/2) z (1 + O(z^4)) (1 + (2 pi i)(E2/12) theta phi)"),
        check_expansion("blowup-psi/y", ex["psi/y"],
                {(2, PHI): L(5, Fraction(-1, 2)), (3, THETA): L(7, Fraction(-1, 2))}, 4,
                "psi/y = -((2 pi i)^2/2) phi~ z^2 - ((2 pi i)^(7/2)/2) theta z^3 + O(z^4)"),
        check_expansion("blowup-phi'", ex["phi'"], {(3, THETA): L(7, Fraction(-1, 2))}, 4,
                "phi' = -((2 pi i)^(7/2)/2) theta z^3 + O(z^4)"),
        check_expansion("blowup-phi'*y", ex["phi'*y"], {(0, THETA): L(1)}, 1,
                "phi' x2/x0 = (2 pi i)^(1/2) theta + O(z)"),
    ]
    return out


def sbar_check(curve) -> list[CheckResult]:
    """``D(psi)(1 - x phi~ psi) = lam (1 + lam^2 (E2/12) theta phi)``."""
    c = curve
    lhs = D(c.psi) * (1 - c.x * c.phitilde * c.psi)
    rhs = (1 + c.theta_phi * c.E2.lam_shift(2) * Fraction(1, 12)).lam_shift(1)
    lhs0 = lhs.component(ONE) + lhs.component(THETA)
    return [
        check_zero("sbar", lhs - rhs,
                   "delta(psi)(1 - x phi~ psi) = (2 pi i)^(1/2) s (1 + (2 pi i)(E2/12) theta phi)"),
        check_zero("sbar-phi0", lhs0 - c.one.lam_shift(1), "at phi = 0: D(psi) = lam"),
    ]


def coordinate_change_check(curve) -> list[CheckResult]:
    c = curve
    inv_y = c.y.inverse()
    w = c.psi + 2 * c.phitilde * c.x * c.x * inv_y
    xy = c.x * inv_y
    nq = c.nq
    out = [
        check_expansion("coord-theta", w, {(0, THETA): QSeries.constant(Scalar.lam(1), nq),
                                   (1, PHI): c.E2.lam_shift(3) * Fraction(1, 12)}, 2,
                "psi + 2 phi~ x^2/y = (2 pi i)^(1/2) theta + (2 pi i) phi~ (E2/12) z + ..."),
        check_expansion("coord-x/y", xy, {(1, ONE): QSeries.constant(Scalar.lam(2, Fraction(-1, 2)), nq)}, 2,
                "x/y = -((2 pi i)/2) z + ...", strict_keys=(ONE,)),
    ]
    # higher coefficients of both series lie in Q[E2, E4, E6]
    bad, undecided = [], []
    for label, f in (("x/y", xy), ("psi + 2 phi~ x^2/y", w)):
        for key in f.keys():
            v = quasimodular_verdict(f.coefficient(*key))
            if v is Verdict.UNEQUAL:
                bad.append(f"{label} z^{key[0]}")
            elif v is Verdict.INSUFFICIENT:
                undecided.append(f"{label} z^{key[0]} undecided at this q-order")
    verdict = Verdict.UNEQUAL if bad else Verdict.INSUFFICIENT if undecided else Verdict.EQUAL
    out.append(CheckResult("coord-quasimodular", verdict,
                           "higher coefficients are polynomials in E2, E4, E6",
                           notes=bad + undecided))
    return out
