"""Check results shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

from .scalars import Verdict
from .scalars import QSeries
from .superfield import MONO_NAMES, ONE, PHI, THETA, THETA_PHI, SuperField

__all__ = ["CheckResult", "check_zero", "check_equal", "check_expansion", "discrepancy_dict"]


def discrepancy_dict(first) -> dict | None:
    if first is None:
        return None
    z_exp, mono, q_exp, lam_exp, value = first
    return {
        "z_exp": z_exp,
        "monomial": MONO_NAMES[mono],
        "q_exp": q_exp,
        "lambda_exp": lam_exp,
        "value": str(value),
    }


@dataclass
class CheckResult:
    name: str
    verdict: Verdict
    statement: str = ""
    discrepancy: dict | None = None
    z_order: int | None = None
    q_order: int | None = None
    notes: list[str] = field(default_factory=list)
    # the displayed formula is a known misprint: failure is the expected outcome
    erratum: bool = False

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.EQUAL

    @property
    def status(self) -> str:
        if self.verdict is Verdict.INSUFFICIENT:
            return "INSUFFICIENT"
        if self.erratum:
            return "UNEXPECTED-PASS" if self.passed else "ERRATUM"
        return "PASS" if self.passed else "FAIL"

    @property
    def ok(self) -> bool:
        """Outcome matches expectation (errata are expected to fail)."""
        return self.status in ("PASS", "ERRATUM")

    def to_json(self) -> dict:
        return {
            "id": self.name,
            "verdict": self.verdict.value,
            "statement": self.statement,
            "first_discrepancy": self.discrepancy,
            "z_order": self.z_order,
            "q_order": self.q_order,
            "erratum": self.erratum,
            "status": self.status,
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, data: dict) -> CheckResult:
        return cls(data["id"], Verdict(data["verdict"]), data.get("statement", ""),
                   data.get("first_discrepancy"), data.get("z_order"), data.get("q_order"),
                   list(data.get("notes", [])), bool(data.get("erratum", False)))

    def line(self) -> str:
        status = self.status
        extra = ""
        if self.discrepancy:
            d = self.discrepancy
            extra = (f"  first difference at z^{d['z_exp']} {d['monomial']} "
                     f"q^{d['q_exp']} lambda^{d['lambda_exp']}: {d['value']}")
        return f"[{status}] {self.name}: {self.statement}{extra}"


def check_zero(name: str, diff: SuperField, statement: str = "", **kw) -> CheckResult:
    verdict, first = diff.compare(0)
    return CheckResult(name, verdict, statement, discrepancy_dict(first),
                       diff.zorder, diff.qorder, **kw)


def check_equal(name: str, lhs: SuperField, rhs, statement: str = "", **kw) -> CheckResult:
    verdict, first = lhs.compare(rhs)
    diff_orders = lhs - rhs
    return CheckResult(name, verdict, statement, discrepancy_dict(first),
                       diff_orders.zorder, diff_orders.qorder, **kw)


def check_expansion(name: str, f: SuperField, expected: dict, below: int, statement: str,
                    erratum: bool = False, strict_keys=None) -> CheckResult:
    """All coefficients with ``z_exp < below`` equal ``expected`` (missing keys mean 0)."""
    ref = SuperField({k: (v if isinstance(v, QSeries) else QSeries.constant(v, f.qorder))
                      for k, v in expected.items()}, below - 1, f.qorder)
    keys = strict_keys if strict_keys is not None else (ONE, THETA, PHI, THETA_PHI)
    window = f.like({k: v for k, v in f.terms.items() if k[0] < below and k[1] in keys})
    window = window.truncate(below - 1)
    ref = ref.like({k: v for k, v in ref.terms.items() if k[1] in keys})
    if f.zorder < below - 1:
        return CheckResult(name, Verdict.INSUFFICIENT, statement, erratum=erratum)
    return check_zero(name, window - ref, statement, erratum=erratum)
