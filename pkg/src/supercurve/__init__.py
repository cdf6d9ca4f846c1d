"""Exact expansions, identities and de Rham cohomology of the genus-1
supercurve with odd spin structure, plus an independent numeric engine."""

from .scalars import QSeries, Scalar, Verdict, eisenstein, named_constant
from .superfield import SuperField, D, d_phi, d_tau, d_theta, d_z
from .curve import RELATIONS, Curve
from .forms import SuperForm, closure_solve, d_rel, d_total, delta, gm_reduce, wedge
from .cohomology import (BaseFunction, CohClass, decompose, gm_connection,
                         horizontal_check, period_relations, quasimodular_form,
                         recombine, reduce_coker)
from .report import CheckResult
from .expr import evaluate, parse, to_source
from .suite import run_suite

__all__ = [
    "QSeries",
    "Scalar",
    "Verdict",
    "eisenstein",
    "named_constant",
    "SuperField",
    "D",
    "d_phi",
    "d_tau",
    "d_theta",
    "d_z",
    "Curve",
    "RELATIONS",
    "SuperForm",
    "closure_solve",
    "d_rel",
    "d_total",
    "delta",
    "gm_reduce",
    "wedge",
    "BaseFunction",
    "CohClass",
    "decompose",
    "recombine",
    "reduce_coker",
    "gm_connection",
    "horizontal_check",
    "period_relations",
    "quasimodular_form",
    "CheckResult",
    "parse",
    "to_source",
    "evaluate",
    "run_suite",
]
