"""The full identity suite behind ``supercurve verify``."""

from __future__ import annotations

import cmath
import time
from concurrent.futures import ThreadPoolExecutor

from . import cohomology, forms, geometry, numeric
from .curve import RELATIONS, Curve
from .report import CheckResult
from .weierstrass import identity_checks

__all__ = ["SECTIONS", "run_suite", "symbolic_sections", "numeric_checks"]

SECTIONS = ("weierstrass", "curve", "forms", "cohomology", "geometry", "numeric")

# the numeric cross-check compares against series at no less than these orders
REFERENCE_NZ, REFERENCE_NQ = 20, 16


def _curve_section(c: Curve) -> list[CheckResult]:
    return [c.check_relation(r) for r in RELATIONS] + c.expansion_checks()


def _cohomology_section(c: Curve) -> list[CheckResult]:
    m = cohomology.gm_connection(c)
    return (cohomology.gm_check(c, m) + cohomology.horizontal_check(c, m)
            + cohomology.period_relations(c) + cohomology.coker_checks(c))


def _geometry_section(c: Curve) -> list[CheckResult]:
    return (geometry.lift_forms_check(c) + geometry.commutator_check(c)
            + geometry.closure_check(c) + geometry.closure_reexpression(c)
            + geometry.blowup_check(c) + geometry.sbar_check(c)
            + geometry.coordinate_change_check(c))


def symbolic_sections(c: Curve) -> dict:
    return {
        "weierstrass": lambda: identity_checks(c.nz, c.nq),
        "curve": lambda: _curve_section(c),
        "forms": lambda: forms.lemma_checks(c),
        "cohomology": lambda: _cohomology_section(c),
        "geometry": lambda: _geometry_section(c),
    }


def numeric_checks(c: Curve, cfg: numeric.NumConfig) -> list[CheckResult]:
    z0 = 0.23 + 0.17 * cfg.tau
    ref = c if (c.nz >= REFERENCE_NZ and c.nq >= REFERENCE_NQ) else Curve(
        max(c.nz, REFERENCE_NZ), max(c.nq, REFERENCE_NQ), c.depth)
    out = numeric.legendre_check(cfg) + [numeric.period_check(cfg)]
    for name in ("Psi1", "Psi2"):
        out += numeric.invariance_check(name, z0, cfg)
    out += numeric.quasi_periodicity_check(z0, cfg)
    out += numeric.cross_check(ref, 0.1 * cmath.exp(0.7j), cfg)
    return out


def run_suite(c: Curve, cfg: numeric.NumConfig | None = None, sections=SECTIONS,
              workers: int = 1) -> tuple[list[tuple[str, CheckResult]], dict[str, float]]:
    """Run the requested sections; returns ``[(section, result)]`` and timings.

    Sections share the curve's cached expansions, so the curve is warmed up
    before any concurrent execution.
    """
    jobs = symbolic_sections(c)
    if "numeric" in sections:
        cfg = cfg or numeric.NumConfig()
        jobs["numeric"] = lambda: numeric_checks(c, cfg)
    jobs = {k: v for k, v in jobs.items() if k in sections}

    def timed(item):
        name, job = item
        t0 = time.perf_counter()
        res = job()
        return name, res, time.perf_counter() - t0

    if workers > 1:
        c.x, c.y, c.Psi2  # populate shared caches once
        with ThreadPoolExecutor(workers) as pool:
            done = list(pool.map(timed, jobs.items()))
    else:
        done = [timed(item) for item in jobs.items()]
    results = [(name, r) for name, res, _ in done for r in res]
    timing = {name: dt for name, _, dt in done}
    return results, timing
