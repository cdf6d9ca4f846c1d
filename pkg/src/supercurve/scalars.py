"""Exact coefficient arithmetic.

A :class:`Scalar` is a Laurent polynomial in a formal symbol ``lam`` with
rational coefficients; ``lam**2`` stands for ``2*pi*i``.  A :class:`QSeries`
is a power series in ``q`` over Scalars, truncated after ``q**order``.

Internally a QSeries is stored transposed, as a map from lam-exponent to a
truncated ``flint.fmpq_poly`` in ``q``.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import flint

__all__ = [
    "Scalar",
    "QSeries",
    "Verdict",
    "NonUnitConstantTerm",
    "UnsupportedWeight",
    "UnknownName",
    "DEFAULT_NQ",
    "eisenstein",
    "named_constant",
    "NAMED_CONSTANTS",
]

DEFAULT_NQ = 16


class NonUnitConstantTerm(ArithmeticError):
    pass


class UnsupportedWeight(ValueError):
    pass


class UnknownName(KeyError):
    pass


class Verdict(enum.Enum):
    EQUAL = "equal-to-order"
    UNEQUAL = "unequal"
    INSUFFICIENT = "insufficient-accuracy"

    def __bool__(self):
        return self is Verdict.EQUAL


def _fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, int):
        return flint.fmpq(c)
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _frac(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class Scalar:
    """Finite sum ``sum_k c_k lam**k`` with rational ``c_k``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        elif not isinstance(coeffs, dict):
            coeffs = {0: coeffs}
        self._c = {int(k): Fraction(v) for k, v in coeffs.items() if v != 0}

    @classmethod
    def lam(cls, k: int = 1, c=1) -> Scalar:
        return cls({k: c})

    @classmethod
    def coerce(cls, x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return cls({0: x})
        if isinstance(x, flint.fmpq):
            return cls({0: _frac(x)})
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def monomial(self) -> tuple[int, Fraction]:
        """Return ``(k, c)`` for a single-term scalar ``c*lam**k``."""
        if len(self._c) != 1:
            raise ValueError(f"{self} is not a lam-monomial")
        return next(iter(self._c.items()))

    def __add__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        try:
            return self + (-Scalar.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for a, u in self._c.items():
            for b, v in other._c.items():
                out[a + b] = out.get(a + b, 0) + u * v
        return Scalar(out)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if not self.is_monomial():
            raise NonUnitConstantTerm(f"{self} is not an invertible lam-monomial")
        k, c = self.monomial()
        return Scalar({-k: 1 / c})

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def evaluate(self, lam: complex) -> complex:
        return sum(complex(float(v)) * lam**k for k, v in self._c.items())

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            v = self._c[k]
            parts.append(str(v) if k == 0 else f"{v}*lam^{k}")
        return " + ".join(parts)

    def to_json(self):
        return {str(k): str(v) for k, v in sorted(self._c.items())}


def _clean(poly: flint.fmpq_poly, n: int) -> flint.fmpq_poly:
    return poly.truncate(n) if poly.length() > n else poly


class QSeries:
    """Truncated q-series over Scalars; coefficients of ``q**0..q**order`` known."""

    __slots__ = ("_t", "order")

    def __init__(self, terms=None, order: int = DEFAULT_NQ):
        self.order = order
        n = order + 1
        t = {}
        if terms:
            for k, poly in terms.items():
                if not isinstance(poly, flint.fmpq_poly):
                    poly = flint.fmpq_poly([_fmpq(c) for c in poly])
                poly = _clean(poly, n) if n > 0 else flint.fmpq_poly()
                if not poly.is_zero():
                    t[k] = poly
        self._t = t

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, c, order: int = DEFAULT_NQ) -> QSeries:
        c = Scalar.coerce(c)
        return cls({k: flint.fmpq_poly([_fmpq(v)]) for k, v in c.coeffs.items()}, order)

    @classmethod
    def from_coeffs(cls, coeffs, order: int | None = None) -> QSeries:
        """Build from a list of Scalars (or rationals) for ``q**0, q**1, ...``."""
        coeffs = [Scalar.coerce(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        by_lam: dict[int, list] = {}
        for n, c in enumerate(coeffs):
            for k, v in c.coeffs.items():
                row = by_lam.setdefault(k, [])
                row.extend([0] * (n + 1 - len(row)))
                row[n] = v
        return cls(by_lam, order)

    @classmethod
    def q(cls, order: int = DEFAULT_NQ) -> QSeries:
        return cls({0: [0, 1]}, order)

    # access -------------------------------------------------------------

    @property
    def terms(self) -> dict[int, flint.fmpq_poly]:
        return self._t

    def lam_exponents(self) -> list[int]:
        return sorted(self._t)

    def coeff(self, n: int) -> Scalar:
        if n > self.order:
            raise IndexError(f"q^{n} is beyond the accuracy order {self.order}")
        return Scalar({k: _frac(p[n]) for k, p in self._t.items() if p[n] != 0})

    def coeffs(self) -> list[Scalar]:
        return [self.coeff(n) for n in range(self.order + 1)]

    def constant_term(self) -> Scalar:
        return Scalar({k: _frac(p[0]) for k, p in self._t.items() if p[0] != 0})

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self._t

    def truncate(self, order: int) -> QSeries:
        if order >= self.order:
            return self
        return QSeries(self._t, order)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> QSeries:
        if isinstance(other, QSeries):
            return other
        return QSeries.constant(Scalar.coerce(other), self.order)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._t)
        for k, p in other._t.items():
            out[k] = out[k] + p if k in out else p
        return QSeries(out, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return QSeries({k: -p for k, p in self._t.items()}, self.order)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        try:
            c = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[int, flint.fmpq_poly] = {}
        for a, v in c.coeffs.items():
            fv = _fmpq(v)
            for k, p in self._t.items():
                term = p * fv
                out[k + a] = out[k + a] + term if k + a in out else term
        return QSeries(out, self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * qs_inv(other)
        return self * Scalar.coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return qs_inv(self) ** (-n)
        out = QSeries.constant(1, self.order)
        for _ in range(n):
            out = out * self
        return out

    def lam_shift(self, k: int) -> QSeries:
        """Multiply by ``lam**k``."""
        if k == 0:
            return self
        return QSeries({e + k: p for e, p in self._t.items()}, self.order)

    def inverse(self) -> QSeries:
        return qs_inv(self)

    def partial(self) -> QSeries:
        return qs_partial(self)

    # comparison -----------------------------------------------------------

    def compare(self, other, min_order: int = 0) -> Verdict:
        other = self._coerce(other)
        joint = min(self.order, other.order)
        if joint < min_order:
            return Verdict.INSUFFICIENT
        diff = (self - other).truncate(joint)
        return Verdict.EQUAL if diff.is_zero() else Verdict.UNEQUAL

    def __eq__(self, other):
        if not isinstance(other, (QSeries, Scalar, int, Fraction)):
            return NotImplemented
        return self.compare(other) is Verdict.EQUAL

    __hash__ = None

    def first_difference(self, other):
        """``(q_exponent, lam_exponent, value)`` of the first nonzero coefficient
        of ``self - other``, or None."""
        diff = self - self._coerce(other)
        best = None
        for k, p in diff._t.items():
            for n, c in enumerate(p.coeffs()):
                if c != 0:
                    if best is None or (n, k) < best[:2]:
                        best = (n, k, _frac(c))
                    break
        return best

    def evaluate(self, lam: complex, q: complex) -> complex:
        total = 0j
        for k, p in self._t.items():
            acc = 0j
            for c in reversed(p.coeffs()):
                acc = acc * q + float(_frac(c))
            total += acc * lam**k
        return total

    def __repr__(self):
        return f"QSeries({self}, order={self.order})"

    def __str__(self):
        parts = []
        for n in range(self.order + 1):
            c = self.coeff(n)
            if not c.is_zero():
                parts.append(f"({c})" + ("" if n == 0 else f"*q^{n}"))
        return (" + ".join(parts) or "0") + f" + O(q^{self.order + 1})"

    def to_json(self):
        return {
            "q_order": self.order,
            "lambda_terms": {
                str(k): [str(_frac(p[n])) for n in range(self.order + 1)]
                for k, p in sorted(self._t.items())
            },
        }

    @classmethod
    def from_json(cls, data) -> QSeries:
        return cls(
            {int(k): [Fraction(v) for v in row] for k, row in data["lambda_terms"].items()},
            int(data["q_order"]),
        )


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product; accuracy is the smaller of the two."""
    order = min(a.order, b.order)
    n = order + 1
    out: dict[int, flint.fmpq_poly] = {}
    for i, p in a._t.items():
        for j, r in b._t.items():
            term = p.mul_low(r, n)
            out[i + j] = out[i + j] + term if i + j in out else term
    return QSeries(out, order)


def qs_inv(a: QSeries) -> QSeries:
    """Multiplicative inverse; the q**0 coefficient must be a lam-monomial."""
    c0 = a.constant_term()
    if not c0.is_monomial():
        raise NonUnitConstantTerm(f"constant term {c0} is not an invertible lam-monomial")
    k, c = c0.monomial()
    # a = c lam^k (1 + h), h has no constant term
    h = (a * Scalar({-k: 1 / c})) - 1
    inv = QSeries.constant(1, a.order)
    power = QSeries.constant(1, a.order)
    for _ in range(a.order):
        power = -(power * h)
        if power.is_zero():
            break
        inv = inv + power
    return inv * Scalar({-k: 1 / c})


def qs_partial(a: QSeries) -> QSeries:
    """Ramanujan's operator ``q d/dq``."""
    out = {}
    for k, p in a._t.items():
        coeffs = p.coeffs()
        out[k] = flint.fmpq_poly([c * n for n, c in enumerate(coeffs)])
    return QSeries(out, a.order)


@lru_cache(maxsize=None)
def _divisor_sums(power: int, nmax: int) -> tuple[int, ...]:
    sums = [0] * (nmax + 1)
    for d in range(1, nmax + 1):
        dp = d**power
        for m in range(d, nmax + 1, d):
            sums[m] += dp
    return tuple(sums)


_EISENSTEIN = {2: (-24, 1), 4: (240, 3), 6: (-504, 5)}


def eisenstein(k: int, order: int = DEFAULT_NQ) -> QSeries:
    """Normalized Eisenstein series ``E_k`` for ``k`` in {2, 4, 6}."""
    if k not in _EISENSTEIN:
        raise UnsupportedWeight(f"weight {k} not supported (expected 2, 4 or 6)")
    if order < 0:
        raise ValueError("order must be >= 0")
    factor, power = _EISENSTEIN[k]
    sig = _divisor_sums(power, order)
    return QSeries({0: [1] + [factor * s for s in sig[1:]]}, order)


def _e(k, order):
    return eisenstein(k, order)


def _eta1(order):
    return _e(2, order).lam_shift(4) * Fraction(-1, 12)


def _g2(order):
    return _e(4, order).lam_shift(8) * Fraction(1, 12)


def _g3(order):
    return _e(6, order).lam_shift(12) * Fraction(-1, 216)


# dotted quantities are d/dtau = lam^2 * q d/dq of the undotted ones
NAMED_CONSTANTS = {
    "eta1": _eta1,
    "g2": _g2,
    "g3": _g3,
    "eta1_dot": lambda n: qs_partial(_eta1(n)).lam_shift(2),
    "g2_dot": lambda n: qs_partial(_g2(n)).lam_shift(2),
    "g3_dot": lambda n: qs_partial(_g3(n)).lam_shift(2),
}

_ALIASES = {
    "η₁": "eta1", "g₂": "g2", "g₃": "g3",
    "η̇₁": "eta1_dot", "ġ₂": "g2_dot", "ġ₃": "g3_dot",
}


def named_constant(name: str, order: int = DEFAULT_NQ) -> QSeries:
    """One of eta1, g2, g3 or their tau-derivatives as an exact QSeries."""
    key = _ALIASES.get(name, name)
    try:
        build = NAMED_CONSTANTS[key]
    except KeyError:
        raise UnknownName(name) from None
    return build(order)
