"""Command-line front end: ``supercurve verify | expand | reduce | gm | eval | periods``.

Exit codes: 0 when every check has its expected outcome, 1 when some
identity fails or a computation raises, 2 on usage errors, 3 when the
truncation orders are too low to decide some check.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import numeric
from .cohomology import (DepthExceeded, NotInSpan, ResidueObstruction, RewriteLimit,
                         gm_check, gm_connection, reduce_coker)
from .curve import DEFAULT_DEPTH, NAMED_FIELDS, Curve
from .curve import DepthExceeded as BasisDepthExceeded
from .expr import ExprSyntaxError, UnknownIdentifier, evaluate, parse
from .forms import NoSolutionAtOrder, ResidualRelativeTwoForm
from .report import CheckResult
from .scalars import DEFAULT_NQ, NonUnitConstantTerm
from .superfield import DEFAULT_NZ, NonUnitLeading
from .suite import SECTIONS, run_suite
from .weierstrass import WEIERSTRASS_NAMES, weierstrass_function

__all__ = ["Report", "main", "run", "build_parser", "EXIT_OK", "EXIT_FAIL",
           "EXIT_USAGE", "EXIT_INSUFFICIENT"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INSUFFICIENT = 0, 1, 2, 3

# errors raised by the computational modules, reported by class name
MODULE_ERRORS = (NonUnitLeading, NonUnitConstantTerm, ResidueObstruction, NotInSpan,
                 DepthExceeded, BasisDepthExceeded, RewriteLimit, NoSolutionAtOrder,
                 ResidualRelativeTwoForm, numeric.PoleAt, numeric.SegmentThroughPole,
                 numeric.ConvergenceFailure)


@dataclass
class Report:
    command: str
    config: dict
    results: list[CheckResult] = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    error: str | None = None

    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_FAIL
        statuses = {r.status for r in self.results}
        if statuses & {"FAIL", "UNEXPECTED-PASS"}:
            return EXIT_FAIL
        if "INSUFFICIENT" in statuses:
            return EXIT_INSUFFICIENT
        return EXIT_OK

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "config": dict(self.config),
            "results": [r.to_json() for r in self.results],
            "timing": dict(self.timing),
            "data": self.data,
            "error": self.error,
            "exit_code": self.exit_code(),
        }

    @classmethod
    def from_json(cls, d: dict) -> Report:
        return cls(d["command"], dict(d["config"]),
                   [CheckResult.from_json(r) for r in d["results"]],
                   dict(d["timing"]), d.get("data", {}), d.get("error"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


# argument handling -------------------------------------------------------------------


def _complex(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(*parts)


def _tau(text: str) -> complex:
    t = _complex(text)
    if t.imag <= 0:
        raise argparse.ArgumentTypeError("tau must have positive imaginary part")
    return t


def _bounded_int(lo: int):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}")
        return v
    return conv


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order-q", type=_bounded_int(0), default=DEFAULT_NQ, metavar="N",
                        help="last q exponent kept (default %(default)s)")
    common.add_argument("--order-z", type=_bounded_int(1), default=DEFAULT_NZ, metavar="N",
                        help="last z exponent kept (default %(default)s)")
    common.add_argument("--depth", type=_bounded_int(2), default=DEFAULT_DEPTH, metavar="K",
                        help="largest n with D^n R in the basis (default %(default)s)")
    common.add_argument("--tau", type=_tau, default=numeric.NumConfig.tau, metavar="RE,IM",
                        help="modular parameter for numeric commands")
    common.add_argument("--tol", type=_positive_float, default=numeric.NumConfig.tol,
                        help="absolute tolerance for numeric checks")
    common.add_argument("--json", metavar="PATH", help="also write the report as JSON")

    p = argparse.ArgumentParser(prog="supercurve", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run the identity suite")
    v.add_argument("--sections", default=",".join(SECTIONS),
                   help="comma separated subset of " + ", ".join(SECTIONS))
    v.add_argument("--no-numeric", action="store_true", help="skip the numeric section")
    v.add_argument("--jobs", type=_bounded_int(1), default=1, help="worker threads")
    v.add_argument("--quiet", action="store_true", help="print only failures and the summary")

    e = sub.add_parser("expand", parents=[common], help="print expansion terms")
    e.add_argument("name", help="named field, Weierstrass function or expression")
    e.add_argument("--terms", type=_bounded_int(1), default=10, metavar="k")

    r = sub.add_parser("reduce", parents=[common], help="class of s*EXPR in H^1")
    r.add_argument("expr")

    sub.add_parser("gm", parents=[common], help="Gauss-Manin connection matrix")

    ev = sub.add_parser("eval", parents=[common], help="evaluate a function numerically")
    ev.add_argument("name", help="one of " + ", ".join(numeric.NUM_NAMES + ("Psi1", "Psi2")))
    ev.add_argument("--z", type=_complex, required=True, metavar="RE,IM")

    sub.add_parser("periods", parents=[common], help="quadrature table of the periods")
    return p


def _config(args) -> dict:
    return {"Nz": args.order_z, "Nq": args.order_q, "K": args.depth, "tol": args.tol,
            "tau": [args.tau.real, args.tau.imag]}


def _num_cfg(args) -> numeric.NumConfig:
    return numeric.NumConfig(tau=args.tau, tol=args.tol)


def _c(z: complex) -> list[float]:
    return [z.real, z.imag]


# commands --------------------------------------------------------------------------


def _verify(args, rep: Report, out):
    sections = [s.strip() for s in args.sections.split(",") if s.strip()]
    unknown = set(sections) - set(SECTIONS)
    if unknown:
        raise _Usage(f"unknown sections: {', '.join(sorted(unknown))}")
    if args.no_numeric and "numeric" in sections:
        sections.remove("numeric")
    curve = Curve(args.order_z, args.order_q, args.depth)
    results, timing = run_suite(curve, _num_cfg(args), sections, workers=args.jobs)
    rep.timing.update(timing)
    current = None
    for section, r in results:
        rep.results.append(r)
        if args.quiet and r.ok:
            continue
        if section != current:
            print(f"== {section}", file=out)
            current = section
        print(r.line(), file=out)
        if r.status == "ERRATUM":
            for n in r.notes:
                print(f"    note: {n}", file=out)
    counts = {}
    for r in rep.results:
        counts[r.status] = counts.get(r.status, 0) + 1
    rep.data["counts"] = counts
    print("summary: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())), file=out)


def _expand(args, rep: Report, out):
    curve = Curve(args.order_z, args.order_q, args.depth)
    name = args.name
    if name in NAMED_FIELDS:
        f = curve.field(name)
    elif name in WEIERSTRASS_NAMES:
        f = weierstrass_function(name, args.order_z, args.order_q).field
    else:
        f = evaluate(parse(name), curve)
    lines = f.expansion_lines(args.terms)
    for line in lines:
        print(line, file=out)
    print(f"+ O(z^{f.zorder + 1}) + O(q^{f.qorder + 1})", file=out)
    rep.data["series"] = f.to_json()
    rep.data["lines"] = lines


def _reduce(args, rep: Report, out):
    curve = Curve(args.order_z, args.order_q, args.depth)
    cls = reduce_coker(evaluate(parse(args.expr), curve), curve)
    h1, h2 = cls.left_coefficients()
    print(f"[s*({args.expr})] = {cls}", file=out)
    print(f"  = ({h1})*[s Psi1] + ({h2})*[s Psi2]", file=out)
    rep.data["class"] = cls.to_json()


def _gm(args, rep: Report, out):
    curve = Curve(args.order_z, args.order_q, args.depth)
    m = gm_connection(curve)
    for line in m.lines():
        print(line, file=out)
    rep.results.extend(gm_check(curve, m))
    for r in rep.results:
        print(r.line(), file=out)
    rep.data["matrix"] = m.to_json()


def _eval(args, rep: Report, out):
    cfg = _num_cfg(args)
    if args.name in ("Psi1", "Psi2"):
        g = numeric.field_eval(args.name, args.z, cfg)
        labels = ("1", "theta", "phi", "thetaphi")
        for lab, v in zip(labels, g.c):
            print(f"{lab}: {v.real:.15g} {v.imag:+.15g}i", file=out)
        rep.data["value"] = {lab: _c(v) for lab, v in zip(labels, g.c)}
    elif args.name in numeric.NUM_NAMES:
        v = numeric.num_eval(args.name, args.z, cfg)
        print(f"{args.name}({args.z}) = {v.real:.15g} {v.imag:+.15g}i", file=out)
        rep.data["value"] = _c(v)
    else:
        raise _Usage(f"unknown function {args.name!r}")


def _periods(args, rep: Report, out):
    cfg = _num_cfg(args)
    ia, ib, za, zb = numeric.period_quadrature(None, cfg)
    eta1, eta2 = numeric.quasi_periods(cfg)
    rows = [("int_alpha dz", ia), ("int_beta dz", ib),
            ("int_alpha zeta1' dz", za), ("int_beta zeta1' dz", zb),
            ("eta1", eta1), ("eta2", eta2), ("tau*eta1 - eta2", cfg.tau * eta1 - eta2)]
    for label, v in rows:
        print(f"{label:22s} {v.real:+.15f} {v.imag:+.15f}i", file=out)
    rep.results.extend(numeric.legendre_check(cfg) + [numeric.period_check(cfg)])
    for r in rep.results:
        print(r.line(), file=out)
    rep.data["table"] = {label: _c(v) for label, v in rows}


COMMANDS = {"verify": _verify, "expand": _expand, "reduce": _reduce, "gm": _gm,
            "eval": _eval, "periods": _periods}


class _Usage(Exception):
    pass


def run(command: str, args: argparse.Namespace, out=None) -> Report:
    """Execute ``command``; module errors are captured in the report."""
    out = out or sys.stdout
    rep = Report(command, _config(args))
    t0 = time.perf_counter()
    try:
        COMMANDS[command](args, rep, out)
    except MODULE_ERRORS as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
    rep.timing["total"] = time.perf_counter() - t0
    return rep


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = run(args.command, args)
    except (ExprSyntaxError, UnknownIdentifier) as exc:
        src = getattr(args, "expr", None) or getattr(args, "name", "")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        lines = src.splitlines() or [""]
        if 1 <= exc.line <= len(lines):
            print("  " + lines[exc.line - 1], file=sys.stderr)
            print("  " + " " * (exc.column - 1) + "^", file=sys.stderr)
        return EXIT_USAGE
    except _Usage as exc:
        parser.error(str(exc))
    if rep.error:
        print(f"error: {rep.error}", file=sys.stderr)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(rep.dumps())
    return rep.exit_code()


if __name__ == "__main__":
    sys.exit(main())
