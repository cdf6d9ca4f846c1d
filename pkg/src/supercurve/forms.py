"""Differential forms on the chart with generators dz, dtheta, dtau, dphi.

Forms are sums ``monomial * coefficient`` with the coefficient written to
the right.  Swapping two symbols costs the product of the degree sign and
the parity sign; dz, dtau are even and dtheta, dphi odd, all of degree 1.
Total form degree is capped at 2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .superfield import (
    ONE,
    PHI,
    THETA,
    SuperField,
    d_phi,
    d_tau,
    d_theta,
    d_z,
)

__all__ = [
    "DZ",
    "DTHETA",
    "DTAU",
    "DPHI",
    "GENERATOR_NAMES",
    "SuperForm",
    "BerezinClass",
    "DegreeCapExceeded",
    "NoSolutionAtOrder",
    "ResidualRelativeTwoForm",
    "wedge",
    "d_total",
    "d_rel",
    "delta",
    "closure_solve",
    "gm_reduce",
    "build_lift",
    "LIFT_NAMES",
    "form_check",
    "lemma_checks",
]

DZ, DTHETA, DTAU, DPHI = 0, 1, 2, 3
GENERATOR_NAMES = ("dz", "dtheta", "dtau", "dphi")
_ODD = (False, True, False, True)
_RELATIVE = (DZ, DTHETA)
MAX_DEGREE = 2
# d of a 2-form is allowed to land in degree 3 so that d(d(u)) = 0 is checkable on 1-forms
_D_DEGREE = MAX_DEGREE + 1


class DegreeCapExceeded(ValueError):
    pass


class NoSolutionAtOrder(ArithmeticError):
    pass


class ResidualRelativeTwoForm(ArithmeticError):
    pass


def _mono_parity(mono: tuple) -> int:
    return sum(_ODD[g] for g in mono) & 1


def _normal_order(m1: tuple, m2: tuple, cap: int = MAX_DEGREE) -> tuple[int, tuple]:
    """Product of two normal-ordered monomials: ``(sign, monomial)``."""
    gens = list(m1 + m2)
    if len(gens) > cap:
        raise DegreeCapExceeded(f"form degree {len(gens)} exceeds cap {cap}")
    sign = 1
    # bubble sort, tracking swap signs
    for i in range(len(gens)):
        for j in range(len(gens) - 1 - i):
            a, b = gens[j], gens[j + 1]
            if a > b:
                gens[j], gens[j + 1] = b, a
                sign *= 1 if (_ODD[a] and _ODD[b]) else -1
    for a, b in zip(gens, gens[1:]):
        if a == b and not _ODD[a]:
            return 0, ()
    return sign, tuple(gens)


def _parity_signed(c: SuperField, odd_passage: bool) -> SuperField:
    """``c`` moved past an odd symbol of degree 0 difference: odd part flips."""
    if not odd_passage:
        return c
    even, odd = c.parts()
    return even - odd


class SuperForm:
    """Finite sum of form monomials with SuperField coefficients on the right."""

    __slots__ = ("_t",)

    def __init__(self, terms=None, _cap: int = MAX_DEGREE):
        t = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) > _cap:
                raise DegreeCapExceeded(f"form degree {len(mono)} exceeds cap")
            sign, nmono = _normal_order((), mono, _cap)
            if sign == 0:
                continue
            c = c if sign > 0 else -c
            if nmono in t:
                t[nmono] = t[nmono] + c
            else:
                t[nmono] = c
        # vanishing coefficients are kept: their accuracy bounds later sums
        self._t = t

    @classmethod
    def function(cls, f: SuperField) -> SuperForm:
        return cls({(): f})

    @classmethod
    def generator(cls, g: int, coeff: SuperField) -> SuperForm:
        return cls({(g,): coeff})

    @property
    def terms(self) -> dict[tuple, SuperField]:
        return {m: c for m, c in self._t.items() if not c.is_zero()}

    def coefficient(self, *mono) -> SuperField | None:
        return self._t.get(tuple(mono))

    def degree(self) -> int | None:
        degs = {len(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("form is not homogeneous in degree")
        return degs.pop()

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self._t.values())

    def is_zero_to_order(self) -> bool:
        return all(c.compare(0)[0] for c in self._t.values())

    def __add__(self, other: SuperForm) -> SuperForm:
        out = dict(self._t)
        for m, c in other._t.items():
            out[m] = out[m] + c if m in out else c
        return SuperForm(out, _D_DEGREE)

    def __neg__(self):
        return SuperForm({m: -c for m, c in self._t.items()}, _D_DEGREE)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        """Right multiplication by a function."""
        if isinstance(f, SuperForm):
            return wedge(self, f)
        return SuperForm({m: c * f for m, c in self._t.items()}, _D_DEGREE)

    def __eq__(self, other):
        if not isinstance(other, SuperForm):
            return NotImplemented
        return (self - other).is_zero_to_order()

    __hash__ = None

    def __repr__(self):
        inner = ", ".join("*".join(GENERATOR_NAMES[g] for g in m) or "1" for m in sorted(self.terms))
        return f"SuperForm({inner})"


def wedge(u: SuperForm, v: SuperForm, _cap: int = MAX_DEGREE) -> SuperForm:
    """Exterior product with the bigraded sign rule."""
    out: dict = {}
    for m1, c1 in u._t.items():
        for m2, c2 in v._t.items():
            sign, mono = _normal_order(m1, m2, _cap)
            if sign == 0:
                continue
            # move c1 (degree 0) past m2: only the parity sign matters
            c1m = _parity_signed(c1, bool(_mono_parity(m2)))
            term = c1m * c2
            if sign < 0:
                term = -term
            out[mono] = out[mono] + term if mono in out else term
    return SuperForm(out, _cap)


_PARTIALS = {DZ: d_z, DTHETA: d_theta, DTAU: d_tau, DPHI: d_phi}


def _d_function(f: SuperField, gens) -> SuperForm:
    return SuperForm({(g,): _PARTIALS[g](f) for g in gens})


def _d(u: SuperForm, gens) -> SuperForm:
    out = SuperForm()
    for mono, c in u._t.items():
        if len(mono) == 0:
            out = out + _d_function(c, gens)
        elif len(mono) < _D_DEGREE:
            # d(m c) = (-1)^deg(m) m dc, generators being closed
            sign = -1 if len(mono) == 1 else 1
            terms = {}
            for g in gens:
                s, nmono = _normal_order(mono, (g,), _D_DEGREE)
                if s:
                    dc = _PARTIALS[g](c)
                    terms[nmono] = terms[nmono] + s * sign * dc if nmono in terms else s * sign * dc
            out = out + SuperForm(terms, _D_DEGREE)
        else:
            raise DegreeCapExceeded("d of a 3-form exceeds the degree cap")
    return out


def d_total(u: SuperForm) -> SuperForm:
    """Total de Rham differential."""
    return _d(u, (DZ, DTHETA, DTAU, DPHI))


def d_rel(u: SuperForm) -> SuperForm:
    """Relative differential: only the z, theta directions."""
    return _d(u, _RELATIVE)


@dataclass(frozen=True)
class BerezinClass:
    """The section ``s * a`` of the relative Berezinian, ``s = delta(theta)``."""

    a: SuperField

    def __eq__(self, other):
        if not isinstance(other, BerezinClass):
            return NotImplemented
        return self.a.compare(other.a)[0].__bool__()

    __hash__ = None


def delta(u: SuperForm) -> BerezinClass:
    """Structure map on relative 1-forms: ``dz*a + dtheta*b -> s*(theta*a + b)``."""
    if any(len(m) != 1 or m[0] not in _RELATIVE for m in u._t):
        raise ValueError("delta expects a relative 1-form")
    a = u._t.get((DZ,))
    b = u._t.get((DTHETA,))
    ref = a if a is not None else b
    if ref is None:
        return BerezinClass(SuperField.zero())
    theta = SuperField.monomial(0, THETA, 1, ref.zorder, ref.qorder)
    out = SuperField.zero(ref.zorder, ref.qorder)
    if a is not None:
        out = out + theta * a
    if b is not None:
        out = out + b
    return BerezinClass(out)


def _alpha(ref: SuperField) -> SuperForm:
    """The kernel generator ``dz - dtheta*theta`` of delta."""
    one = SuperField.const(1, ref.zorder, ref.qorder)
    theta = SuperField.monomial(0, THETA, 1, ref.zorder, ref.qorder)
    return SuperForm({(DZ,): one, (DTHETA,): -theta})


def _theta_free(f: SuperField) -> SuperField:
    return f.component(ONE) + f.component(PHI)


def closure_solve(a: SuperField) -> SuperForm:
    """The unique d_rel-closed relative 1-form ``omega`` with ``delta(omega) = s*a``.

    ``omega = dtheta*a + (dz - dtheta*theta)*c``; the dtheta^2 and dz dtheta
    components of ``d_rel(omega) = 0`` fix the two theta-components of ``c``.
    """
    theta = SuperField.monomial(0, THETA, 1, a.zorder, a.qorder)
    c0 = d_theta(a)
    c1 = d_z(_theta_free(a))
    c = c0 + theta * c1
    omega = SuperForm({(DTHETA,): a}) + _alpha(a) * c
    if not delta(omega).a.compare(a)[0]:
        raise NoSolutionAtOrder("delta(omega) does not reproduce the input")
    if not d_rel(omega).is_zero_to_order():
        raise NoSolutionAtOrder("no d_rel-closed lift at this truncation order")
    return omega


def gm_reduce(w: SuperForm) -> tuple[BerezinClass, BerezinClass]:
    """Reduce a total 2-form modulo ``(dz - dtheta*theta)*Omega^1 + Omega^2_S``.

    Returns the (dtau, dphi) components after writing the surviving part as
    ``dtau ^ omega_tau + dphi ^ omega_phi`` and applying delta.
    """
    if w.is_zero():
        z = SuperField.zero()
        return BerezinClass(z), BerezinClass(z)
    if w.degree() != 2:
        raise ValueError("gm_reduce expects a 2-form")
    ref = next(iter(w._t.values()))
    theta = SuperField.monomial(0, THETA, 1, ref.zorder, ref.qorder)
    one = SuperField.const(1, ref.zorder, ref.qorder)
    dtheta_theta = SuperForm({(DTHETA,): theta})
    kept = SuperForm()
    for mono, c in w._t.items():
        if DZ in mono:
            # dz = alpha + dtheta*theta; the alpha part is discarded
            (other,) = [g for g in mono if g != DZ]
            kept = kept + wedge(dtheta_theta, SuperForm({(other,): one})) * c
        elif DTHETA in mono:
            kept = kept + SuperForm({mono: c})
        # purely base monomials are dropped
    residual = kept.coefficient(DTHETA, DTHETA)
    if residual is not None and not residual.compare(0)[0]:
        raise ResidualRelativeTwoForm("a dtheta^2 term survives the reduction")
    out = []
    for base in (DTAU, DPHI):
        c = kept.coefficient(DTHETA, base)
        if c is None:
            out.append(BerezinClass(SuperField.zero(ref.zorder, ref.qorder)))
            continue
        # dtheta ^ dbase * c == sign * dbase ^ (dtheta * c)
        sign, _ = _normal_order((base,), (DTHETA,))
        out.append(BerezinClass(c if sign > 0 else -c))
    return out[0], out[1]


def build_lift(name: str, curve) -> SuperForm:
    """The explicit relative forms omega1, omega2 and their total lifts."""
    th, ph = curve.theta, curve.phi
    tp = th * ph
    z1, z1p, z1d = curve.zeta1, curve.zeta1_prime, curve.zeta1_dot
    ref = curve.one
    alpha = _alpha(ref)
    if name in ("omega1", "omega1_tilde"):
        rel = SuperForm({(DTHETA,): curve.Psi1}) + alpha * (1 - tp * z1p)
        if name == "omega1":
            return rel
        return rel + SuperForm({(DPHI,): th * z1, (DTAU,): -(z1 + 2 * tp * z1d)})
    if name in ("omega2", "omega2_tilde"):
        rel = SuperForm({(DTHETA,): curve.Psi2}) + alpha * (z1p + tp * curve.zeta1_dot_prime)
        if name == "omega2":
            return rel
        return rel + SuperForm({(DPHI,): -(th * z1d), (DTAU,): z1d + tp * curve.zeta1_ddot})
    raise KeyError(f"unknown lift {name!r}")


LIFT_NAMES = ("omega1", "omega2", "omega1_tilde", "omega2_tilde")


def form_check(name: str, form: SuperForm, statement: str = "", **kw):
    """A :class:`CheckResult` asserting that every coefficient of ``form`` vanishes."""
    from .report import CheckResult, discrepancy_dict
    from .scalars import Verdict

    verdict, first = Verdict.EQUAL, None
    for mono in sorted(form._t):
        v, f = form._t[mono].compare(0)
        if v is Verdict.UNEQUAL:
            verdict, first = v, f
            break
        if v is Verdict.INSUFFICIENT:
            verdict = v
    res = CheckResult(name, verdict, statement, discrepancy_dict(first), **kw)
    if first is not None:
        res.notes.append("in the " + ("*".join(GENERATOR_NAMES[g] for g in mono) or "1")
                         + " coefficient")
    return res


def lemma_checks(curve) -> list:
    """The relative forms omega_i: delta, closedness, closure_solve, and the
    reduction of the differentials of their total lifts."""
    from .report import check_equal, check_zero

    out = []
    for i, psi in ((1, curve.Psi1), (2, curve.Psi2)):
        w = build_lift(f"omega{i}", curve)
        out.append(check_equal(f"delta-omega{i}", delta(w).a, psi,
                               f"delta(omega{i}) = s Psi{i}"))
        out.append(form_check(f"drel-omega{i}", d_rel(w), f"d_rel(omega{i}) = 0"))
        out.append(form_check(f"solve-omega{i}", closure_solve(psi) - w,
                              f"closure_solve(Psi{i}) = omega{i}"))
        out.append(form_check(f"dd-omega{i}-tilde",
                              d_total(d_total(build_lift(f"omega{i}_tilde", curve))),
                              f"d(d(omega{i}~)) = 0"))
    for i, et, label in ((1, curve.Psi2, "s Psi2"), (2, 0, "0")):
        t, p = gm_reduce(d_total(build_lift(f"omega{i}_tilde", curve)))
        out.append(check_zero(f"gm-reduce-omega{i}-tau", t.a - et,
                              f"dtau part of d(omega{i}~) reduces to {label}"))
        out.append(check_zero(f"gm-reduce-omega{i}-phi", p.a,
                              f"dphi part of d(omega{i}~) reduces to 0"))
    return out
