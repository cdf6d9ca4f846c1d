"""Laurent series in z over QSeries tensored with the Grassmann algebra on theta, phi.

Grassmann monomials are encoded as bitmasks: ``ONE=0``, ``THETA=1``,
``PHI=2``, ``THETA_PHI=3`` (normal order theta before phi).  A field is
known for z-exponents up to and including ``zorder`` and q-exponents up to
and including ``qorder``.
"""

from __future__ import annotations

from fractions import Fraction

import flint

from .scalars import (
    DEFAULT_NQ,
    NonUnitConstantTerm,
    QSeries,
    Scalar,
    Verdict,
    _fmpq,
    _frac,
    qs_inv,
)

__all__ = [
    "SuperField",
    "NonUnitLeading",
    "ONE",
    "THETA",
    "PHI",
    "THETA_PHI",
    "MONO_NAMES",
    "DEFAULT_NZ",
    "d_z",
    "d_theta",
    "d_phi",
    "d_tau",
    "D",
    "sf_mul",
    "sf_inv",
]

ONE, THETA, PHI, THETA_PHI = 0, 1, 2, 3
MONO_NAMES = {ONE: "1", THETA: "theta", PHI: "phi", THETA_PHI: "thetaphi"}
MONO_BY_NAME = {v: k for k, v in MONO_NAMES.items()}
DEFAULT_NZ = 20


class NonUnitLeading(ArithmeticError):
    pass


def _parity(mono: int) -> int:
    return (mono & 1) ^ (mono >> 1)


def _mono_sign(ma: int, mb: int) -> int:
    """Sign of ``ma * mb`` brought to normal order (0 if the product vanishes)."""
    if ma & mb:
        return 0
    return -1 if (ma & PHI and mb & THETA) else 1


def _add_into(slot: dict, lam: int, poly):
    if lam in slot:
        slot[lam] = slot[lam] + poly
    else:
        slot[lam] = poly


class SuperField:
    __slots__ = ("_t", "zorder", "qorder")

    def __init__(self, terms=None, zorder: int = DEFAULT_NZ, qorder: int = DEFAULT_NQ):
        self.zorder = zorder
        self.qorder = qorder
        n = qorder + 1
        t = {}
        if terms:
            for (e, mono), coeff in terms.items():
                if e > zorder:
                    continue
                if isinstance(coeff, QSeries):
                    coeff = coeff.terms
                slot = {}
                for lam, poly in coeff.items():
                    if poly.length() > n:
                        poly = poly.truncate(n)
                    if not poly.is_zero():
                        slot[lam] = poly
                if slot:
                    t[(e, mono)] = slot
        self._t = t

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, zorder=DEFAULT_NZ, qorder=DEFAULT_NQ) -> SuperField:
        return cls({}, zorder, qorder)

    @classmethod
    def monomial(cls, exp: int = 0, mono: int = ONE, coeff=1,
                 zorder=DEFAULT_NZ, qorder=DEFAULT_NQ) -> SuperField:
        if not isinstance(coeff, QSeries):
            coeff = QSeries.constant(coeff, qorder)
        return cls({(exp, mono): coeff}, zorder, min(qorder, coeff.order))

    @classmethod
    def const(cls, coeff, zorder=DEFAULT_NZ, qorder=DEFAULT_NQ) -> SuperField:
        return cls.monomial(0, ONE, coeff, zorder, qorder)

    @classmethod
    def from_laurent(cls, coeffs: dict, mono: int = ONE,
                     zorder=DEFAULT_NZ, qorder=DEFAULT_NQ) -> SuperField:
        """Build ``sum_n coeffs[n] * z**n * mono`` from QSeries coefficients."""
        terms = {(n, mono): c for n, c in coeffs.items()}
        return cls(terms, zorder, qorder)

    def like(self, terms) -> SuperField:
        return SuperField(terms, self.zorder, self.qorder)

    def _coerce(self, other) -> SuperField:
        if isinstance(other, SuperField):
            return other
        if isinstance(other, QSeries):
            return SuperField.const(other, self.zorder, min(self.qorder, other.order))
        return SuperField.const(Scalar.coerce(other), self.zorder, self.qorder)

    # access -------------------------------------------------------------

    @property
    def terms(self):
        return self._t

    def keys(self):
        return sorted(self._t)

    def coefficient(self, exp: int, mono: int = ONE) -> QSeries:
        if exp > self.zorder:
            raise IndexError(f"z^{exp} is beyond the accuracy order {self.zorder}")
        return QSeries(self._t.get((exp, mono), {}), self.qorder)

    def component(self, mono: int) -> SuperField:
        """The part of the field carrying the Grassmann monomial ``mono``."""
        return self.like({k: v for k, v in self._t.items() if k[1] == mono})

    def body(self) -> SuperField:
        return self.component(ONE)

    def valuation(self) -> int | None:
        if not self._t:
            return None
        return min(e for e, _ in self._t)

    def _val(self) -> int:
        v = self.valuation()
        return self.zorder + 1 if v is None else v

    def is_zero(self) -> bool:
        return not self._t

    def parity(self) -> str:
        pars = {_parity(m) for _, m in self._t}
        if not pars:
            return "zero"
        if len(pars) == 2:
            return "mixed"
        return "odd" if pars == {1} else "even"

    def parts(self) -> tuple[SuperField, SuperField]:
        """Split into (even, odd) parts."""
        even = {k: v for k, v in self._t.items() if not _parity(k[1])}
        odd = {k: v for k, v in self._t.items() if _parity(k[1])}
        return self.like(even), self.like(odd)

    def truncate(self, zorder: int | None = None, qorder: int | None = None) -> SuperField:
        zo = self.zorder if zorder is None else min(zorder, self.zorder)
        qo = self.qorder if qorder is None else min(qorder, self.qorder)
        return SuperField(self._t, zo, qo)

    def principal_depth(self) -> int:
        v = self.valuation()
        return 0 if v is None or v >= 0 else -v

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        zo = min(self.zorder, other.zorder)
        out = {k: dict(v) for k, v in self._t.items()}
        for k, v in other._t.items():
            slot = out.setdefault(k, {})
            for lam, p in v.items():
                _add_into(slot, lam, p)
        return SuperField(out, zo, min(self.qorder, other.qorder))

    __radd__ = __add__

    def __neg__(self):
        return self.like({k: {lam: -p for lam, p in v.items()} for k, v in self._t.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, SuperField):
            return sf_mul(self, other)
        if isinstance(other, QSeries):
            return self.qscale(other)
        try:
            c = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    def __rmul__(self, other):
        # scalars and q-series are even, so they commute with everything
        return self.__mul__(other)

    def scale(self, c) -> SuperField:
        c = Scalar.coerce(c)
        out = {}
        for key, v in self._t.items():
            slot = {}
            for a, r in c.coeffs.items():
                fr = _fmpq(r)
                for lam, p in v.items():
                    _add_into(slot, lam + a, p * fr)
            out[key] = slot
        return self.like(out)

    def qscale(self, s: QSeries) -> SuperField:
        """Coefficientwise product with a z-constant; the z-accuracy is kept."""
        qo = min(self.qorder, s.order)
        n = qo + 1
        out = {}
        for key, v in self._t.items():
            slot = {}
            for a, r in s.terms.items():
                for lam, p in v.items():
                    _add_into(slot, lam + a, p.mul_low(r, n))
            out[key] = slot
        return SuperField(out, self.zorder, qo)

    def lam_shift(self, k: int) -> SuperField:
        return self.like({key: {lam + k: p for lam, p in v.items()} for key, v in self._t.items()})

    def __truediv__(self, other):
        if isinstance(other, SuperField):
            return self * sf_inv(other)
        if isinstance(other, QSeries):
            return self * qs_inv(other)
        return self.scale(Scalar.coerce(other).inverse())

    def __rtruediv__(self, other):
        return self._coerce(other) * sf_inv(self)

    def __pow__(self, n: int):
        if n < 0:
            return sf_inv(self) ** (-n)
        if n == 0:
            return self._coerce(1)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> SuperField:
        return sf_inv(self)

    # derivations ----------------------------------------------------------

    def d_z(self):
        return d_z(self)

    def d_theta(self):
        return d_theta(self)

    def d_phi(self):
        return d_phi(self)

    def d_tau(self):
        return d_tau(self)

    def D(self):
        return D(self)

    # comparison -----------------------------------------------------------

    def first_nonzero(self):
        """``(z_exp, mono, q_exp, lam_exp, value)`` of the lowest known nonzero
        coefficient, or None."""
        best = None
        for (e, mono), v in self._t.items():
            for lam, p in v.items():
                for n, c in enumerate(p.coeffs()):
                    if c != 0:
                        cand = (e, mono, n, lam, _frac(c))
                        if best is None or cand[:4] < best[:4]:
                            best = cand
                        break
        return best

    def compare(self, other) -> tuple[Verdict, tuple | None]:
        """Compare to the joint accuracy; returns the verdict and the first
        differing coefficient."""
        other = self._coerce(other)
        diff = self - other
        lowest = [v for v in (self.valuation(), other.valuation()) if v is not None]
        if diff.qorder < 0 or (lowest and diff.zorder < min(lowest)):
            return Verdict.INSUFFICIENT, None
        first = diff.first_nonzero()
        return (Verdict.EQUAL if first is None else Verdict.UNEQUAL), first

    def __eq__(self, other):
        if not isinstance(other, (SuperField, QSeries, Scalar, int, Fraction)):
            return NotImplemented
        return self.compare(other)[0] is Verdict.EQUAL

    __hash__ = None

    # evaluation / printing ------------------------------------------------

    def evaluate(self, z: complex, lam: complex, q: complex) -> tuple[complex, ...]:
        """Numerically evaluate the four Grassmann components at a point."""
        out = [0j, 0j, 0j, 0j]
        for (e, mono), v in self._t.items():
            out[mono] += QSeries(v, self.qorder).evaluate(lam, q) * z**e
        return tuple(out)

    def expansion_lines(self, limit: int | None = None) -> list[str]:
        """Plain-text terms ``coef * lambda^k * q^n * z^m * monomial``."""
        lines = []
        for e, mono in self.keys():
            for lam, p in sorted(self._t[(e, mono)].items()):
                for n, c in enumerate(p.coeffs()):
                    if c != 0:
                        lines.append(f"{c} * lambda^{lam} * q^{n} * z^{e} * {MONO_NAMES[mono]}")
        return lines if limit is None else lines[:limit]

    def __repr__(self):
        return f"SuperField({len(self._t)} terms, zorder={self.zorder}, qorder={self.qorder})"

    def __str__(self):
        parts = []
        for e, mono in self.keys():
            c = QSeries(self._t[(e, mono)], self.qorder)
            m = "" if mono == ONE else "*" + MONO_NAMES[mono]
            parts.append(f"[{c}]*z^{e}{m}")
        return " + ".join(parts) or "0"

    def to_json(self):
        terms = []
        for e, mono in self.keys():
            for lam, p in sorted(self._t[(e, mono)].items()):
                terms.append({
                    "z_exp": e,
                    "monomial": MONO_NAMES[mono],
                    "lambda_exp": lam,
                    "q_coeffs": [str(_frac(p[n])) for n in range(self.qorder + 1)],
                })
        zmin = self.valuation()
        return {
            "q_order": self.qorder,
            "z_min": zmin if zmin is not None else self.zorder + 1,
            "z_max": self.zorder,
            "terms": terms,
        }

    @classmethod
    def from_json(cls, data) -> SuperField:
        terms = {}
        for t in data["terms"]:
            key = (int(t["z_exp"]), MONO_BY_NAME[t["monomial"]])
            poly = flint.fmpq_poly([_fmpq(Fraction(c)) for c in t["q_coeffs"]])
            terms.setdefault(key, {})[int(t["lambda_exp"])] = poly
        return cls(terms, int(data["z_max"]), int(data["q_order"]))


def sf_mul(f: SuperField, g: SuperField) -> SuperField:
    """Graded-commutative product with tracked z- and q-accuracy."""
    zo = min(f.zorder + g._val(), g.zorder + f._val())
    qo = min(f.qorder, g.qorder)
    n = qo + 1
    gitems = sorted(g._t.items())
    out: dict = {}
    for (a, ma), ca in f._t.items():
        for (b, mb), cb in gitems:
            e = a + b
            if e > zo:
                break
            sgn = _mono_sign(ma, mb)
            if not sgn:
                continue
            slot = out.setdefault((e, ma | mb), {})
            for la, pa in ca.items():
                for lb, pb in cb.items():
                    term = pa.mul_low(pb, n)
                    _add_into(slot, la + lb, term if sgn > 0 else -term)
    return SuperField(out, zo, qo)


def sf_inv(f: SuperField) -> SuperField:
    """Inverse of a field whose lowest body coefficient is a unit."""
    body_exps = [e for e, m in f._t if m == ONE]
    if not body_exps:
        raise NonUnitLeading("field has no body part")
    v = min(body_exps)
    try:
        lead_inv_c = qs_inv(f.coefficient(v, ONE))
    except NonUnitConstantTerm as exc:
        raise NonUnitLeading(str(exc)) from None
    lead_inv = SuperField.monomial(-v, ONE, lead_inv_c, f.zorder - 2 * v, f.qorder)
    # after normalisation f = 1 + hb + hn, hb body with positive exponents
    h = f * lead_inv - 1
    hb, hn = h.body(), h - h.body()
    binv = h._coerce(1)
    power = h._coerce(1)
    while True:
        power = -(power * hb)
        if power.is_zero() or power._val() > binv.zorder:
            break
        binv = binv + power
    m = hn * binv
    inner = binv * (1 - m + m * m)
    return inner * lead_inv


def d_z(f: SuperField) -> SuperField:
    out = {}
    for (e, mono), v in f._t.items():
        if e:
            fe = flint.fmpq(e)
            out[(e - 1, mono)] = {lam: p * fe for lam, p in v.items()}
    return SuperField(out, f.zorder - 1, f.qorder)


def d_theta(f: SuperField) -> SuperField:
    """Left derivative in theta."""
    out = {}
    for (e, mono), v in f._t.items():
        if mono == THETA:
            out[(e, ONE)] = v
        elif mono == THETA_PHI:
            out[(e, PHI)] = v
    return f.like(out)


def d_phi(f: SuperField) -> SuperField:
    """Left derivative in phi; passing theta costs a sign."""
    out = {}
    for (e, mono), v in f._t.items():
        if mono == PHI:
            out[(e, ONE)] = v
        elif mono == THETA_PHI:
            out[(e, THETA)] = {lam: -p for lam, p in v.items()}
    return f.like(out)


def d_tau(f: SuperField) -> SuperField:
    """``d/dtau = 2 pi i q d/dq`` applied to every coefficient."""
    out = {}
    for key, v in f._t.items():
        slot = {}
        for lam, p in v.items():
            coeffs = p.coeffs()
            slot[lam + 2] = flint.fmpq_poly([c * k for k, c in enumerate(coeffs)])
        out[key] = slot
    return f.like(out)


def _theta_times(f: SuperField) -> SuperField:
    out = {}
    for (e, mono), v in f._t.items():
        if mono == ONE:
            out[(e, THETA)] = v
        elif mono == PHI:
            out[(e, THETA_PHI)] = v
    return f.like(out)


def D(f: SuperField) -> SuperField:
    """Superconformal derivation ``d/dtheta + theta d/dz``."""
    return d_theta(f) + _theta_times(d_z(f))
