"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line, printed in the terminal summary.
Statements are checked exactly as displayed; corrected forms are reported
alongside but do not change the verdict of a criterion.
"""

import cmath
import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from supercurve.cohomology import (
    BaseFunction,
    CohClass,
    decompose,
    expected_gm_matrix,
    gm_connection,
    horizontal_check,
    period_relations,
    recombine,
    reduce_coker,
)
from supercurve.forms import DPHI, DTAU, DTHETA, DZ, SuperForm, d_total, wedge
from supercurve.geometry import (
    blowup_check,
    closure_check,
    closure_reexpression,
    commutator_check,
)
from supercurve.numeric import (
    NumConfig,
    cross_check,
    invariance_check,
    legendre_check,
    period_quadrature,
)
from supercurve.scalars import QSeries, Verdict
from supercurve.superfield import ONE, PHI, THETA, THETA_PHI, SuperField, D
from supercurve.weierstrass import identity_checks

NZ, NQ, K = 20, 16, 8

TIME_LIMIT = 60.0
INVARIANCE_TOL = 1e-9
PERIOD_TOL = 1e-8
LEGENDRE_TOL = 1e-9
CROSS_TOL = 1e-9
RANDOM_CASES = 100
INVARIANCE_POINTS = 20
SEED = 20240611


@pytest.fixture
def record(request):
    def rec(n: int, ok: bool, title: str, detail: str = ""):
        line = f"CRITERION {n} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
        request.config.acceptance_lines[n] = line
        print(line)
    return rec


def literal_failures(results):
    """Names of displayed statements that do not hold (errata included)."""
    return [r.name for r in results if r.verdict is not Verdict.EQUAL]


# 1 ------------------------------------------------------------------------------------


_CRITERION_1 = """
import json, time
t0 = time.perf_counter()
from supercurve.curve import Curve
c = Curve(%d, %d, %d)
out = {i: c.check_relation(i).verdict.value for i in %r}
out["DPsi2_corrected"] = c.check_relation("DPsi2_corrected").verdict.value
print(json.dumps({"verdicts": out, "elapsed": time.perf_counter() - t0}))
"""


def test_criterion_1_identity_suite(record):
    # fresh interpreter, so no expansion caches are warm
    ids = ["DPsi1", "DPsi2", "Psi2eq", "DRx", "D3Ry", "Dpsi", "cubic"]
    proc = subprocess.run([sys.executable, "-c", _CRITERION_1 % (NZ, NQ, K, ids)],
                          capture_output=True, text=True, check=True)
    data = json.loads(proc.stdout)
    verdicts, elapsed = data["verdicts"], data["elapsed"]
    bad = [i for i in ids if verdicts[i] != Verdict.EQUAL.value]
    ok = not bad and elapsed < TIME_LIMIT
    detail = f"{len(ids) - len(bad)}/{len(ids)} displayed relations exact in {elapsed:.1f}s"
    if bad:
        detail += f"; failing as displayed: {', '.join(bad)}"
        detail += ("; with eta1 at tau+theta*phi D(Psi2) holds: "
                   f"{verdicts['DPsi2_corrected'] == Verdict.EQUAL.value}")
    record(1, ok, "identity suite at Nz=20, Nq=16", detail)
    assert ok, detail


# 2 ------------------------------------------------------------------------------------


def test_criterion_2_ramanujan_weierstrass(record):
    by = {r.name: r for r in identity_checks(NZ, NQ)}
    names = ["ramanujan-E2", "ramanujan-E4", "ramanujan-E6", "W1", "W2", "W3"]
    bad = literal_failures([by[n] for n in names])
    ok = not bad
    detail = f"{len(names) - len(bad)}/{len(names)} exact"
    if bad:
        detail += f"; failing as displayed: {', '.join(bad)}"
        detail += f"; W2 with the missing wp factor holds: {by['W2-corrected'].passed}"
    record(2, ok, "Ramanujan and Weierstrass identities", detail)
    assert ok, detail


# 3 ------------------------------------------------------------------------------------


def test_criterion_3_gauss_manin(curve, record):
    m = gm_connection(curve)
    matrix_ok = m.compare(expected_gm_matrix(curve.nq)) is Verdict.EQUAL
    lifts_ok = all(r.passed for r in m.checks)
    horiz = horizontal_check(curve, m)
    per = period_relations(curve)
    ok = matrix_ok and lifts_ok and all(r.passed for r in horiz + per)
    detail = (f"matrix {'exact' if matrix_ok else 'differs'}, "
              f"{sum(r.passed for r in horiz)}/{len(horiz)} horizontal, "
              f"{sum(r.passed for r in per)}/{len(per)} period relations")
    record(3, ok, "Gauss-Manin connection", detail)
    assert ok, detail


# 4 ------------------------------------------------------------------------------------


def test_criterion_4_kodaira_spencer(curve, record):
    comm = {r.name: r for r in commutator_check(curve)}
    clos = {r.name: r for r in closure_check(curve)}
    literal = [comm["comm-tau"], comm["comm-phi"],
               clos["Dtau-psi"], clos["Dtau-Psi2"], clos["Dphi-psi"], clos["Dphi-Psi2"]]
    reexp = closure_reexpression(curve)
    bad = literal_failures(literal) + literal_failures(reexp)
    ok = not bad
    detail = (f"{len(literal) - len(literal_failures(literal))}/{len(literal)} displayed "
              f"identities exact, {len(reexp) - len(literal_failures(reexp))}/{len(reexp)} "
              "right-hand sides quasimodular")
    if bad:
        corrected = [clos["Dtau-psi-corrected"], clos["Dphi-Psi2-corrected"]]
        detail += f"; failing as displayed: {', '.join(bad)}"
        detail += f"; corrected forms hold: {all(r.passed for r in corrected)}"
    record(4, ok, "commutators and closure formulas", detail)
    assert ok, detail


# 5 ------------------------------------------------------------------------------------


def test_criterion_5_blowup(curve, record):
    by = {r.name: r for r in blowup_check(curve)}
    prefactors = ["blowup-1/y", "blowup-x/y", "blowup-psi/y", "blowup-phi'", "blowup-phi'*y"]
    bad = literal_failures([by[n] for n in prefactors])
    # the x/y coefficient is -(2 pi i)/2; the coordinate-change "-2 pi i" must be reported as an erratum
    coordchange = by["blowup-x/y-coordchange"]
    flagged = coordchange.status == "ERRATUM"
    ok = not bad and flagged
    detail = (f"{len(prefactors) - len(bad)}/{len(prefactors)} prefactors exact, "
              f"x/y = -(2 pi i/2) z with the coordinate-change slip flagged: {flagged}")
    tp = [n for n in ("blowup-1/y-thetaphi", "blowup-x/y-thetaphi") if not by[n].passed]
    if tp:
        detail += f"; theta*phi factors as displayed fail ({', '.join(tp)}), corrected hold: " \
                  f"{by['blowup-1/y-thetaphi-corrected'].passed and by['blowup-x/y-thetaphi-corrected'].passed}"
    record(5, ok, "blow-up chart expansions", detail)
    assert ok, detail


# 6 ------------------------------------------------------------------------------------

# regular-enough generators: poles of order at most 5 keep D~(g) inside the basis depth
_ALG = ["1", "x", "y", "x^2", "x*y", "psi", "x*psi", "y*psi", "x^2*psi"]


def _alg_elements(c):
    from supercurve.expr import evaluate
    return [evaluate(s, c) for s in _ALG]


def _rand_q(rng, order, scale=3):
    coeffs = [Fraction(rng.randint(-scale, scale), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
    return QSeries({0: coeffs}, order)


def _rand_field(rng, zo, qo, monos=(ONE, THETA, PHI, THETA_PHI)):
    terms = {(rng.randint(-3, 3), rng.choice(monos)): _rand_q(rng, qo) for _ in range(rng.randint(1, 4))}
    return SuperField(terms, zo, qo)


def _parity(f):
    return 0 if f.parity() in ("even", "zero") else 1


def test_criterion_6_property_suites(curve, record):
    rng = random.Random(SEED)
    c = curve
    zero = CohClass.make(0, 0, c.nq)
    alg = _alg_elements(c)

    # reduce_coker(D~ g) = 0
    dt_fail = d_pass = 0
    for _ in range(RANDOM_CASES):
        g = c.const(0)
        for e in rng.sample(alg, rng.randint(1, 3)):
            coeff = c.const(_rand_q(rng, c.nq)) + c.phi * c.const(_rand_q(rng, c.nq))
            g = g + coeff * e
        if reduce_coker(c.Dt(g), c).compare(zero) is not Verdict.EQUAL:
            dt_fail += 1
        if reduce_coker(D(g), c).compare(zero) is Verdict.EQUAL:
            d_pass += 1

    # decompose round trip on span elements
    basis = c.fun_basis()
    rt_fail = 0
    for _ in range(RANDOM_CASES):
        want = {}
        f = SuperField.zero(c.nz, c.nq)
        for name, e in rng.sample(basis, rng.randint(1, 4)):
            a, b = _rand_q(rng, c.nq), _rand_q(rng, c.nq)
            want[name] = BaseFunction(a, b)
            f = f + e * a + c.phi * e * b
        dec = decompose(f, c)
        got = dec.nonzero()
        same = set(got) == {k for k, v in want.items() if not v.is_zero()} and all(
            got[k] == want[k] for k in got)
        if not same or recombine(dec, c).compare(f)[0] is not Verdict.EQUAL:
            rt_fail += 1

    # d^2 = 0 on forms and super-Leibniz on fields
    zo, qo = 6, 3
    dd_fail = leib_fail = 0
    for _ in range(RANDOM_CASES):
        f = _rand_field(rng, zo, qo)
        u = SuperForm({(g,): _rand_field(rng, zo, qo) for g in (DZ, DTHETA, DTAU, DPHI)})
        if not (d_total(d_total(SuperForm.function(f))).is_zero_to_order()
                and d_total(d_total(u)).is_zero_to_order()):
            dd_fail += 1
        a = _rand_field(rng, zo, qo, rng.choice([(ONE, THETA_PHI), (THETA, PHI)]))
        b = _rand_field(rng, zo, qo)
        sign = -1 if _parity(a) else 1
        lhs, rhs = D(a * b), D(a) * b + sign * (a * D(b))
        fa, fb = SuperForm.function(a), SuperForm.function(b)
        dl = d_total(SuperForm.function(a * b))
        dr = wedge(d_total(fa), fb) + wedge(fa, d_total(fb))
        if lhs.compare(rhs)[0] is Verdict.UNEQUAL or not (dl - dr).is_zero_to_order():
            leib_fail += 1

    ok = dt_fail == rt_fail == dd_fail == leib_fail == 0
    detail = (f"reduce_coker(D~ g) != 0 in {dt_fail}/{RANDOM_CASES} "
              f"(reduce_coker(D g) = 0 in {d_pass}/{RANDOM_CASES}); "
              f"round-trip failures {rt_fail}/{RANDOM_CASES}; "
              f"d^2 failures {dd_fail}/{RANDOM_CASES}; Leibniz failures {leib_fail}/{RANDOM_CASES}")
    record(6, ok, "randomized property suites", detail)
    assert ok, detail


# 7 ------------------------------------------------------------------------------------


def test_criterion_7_numeric_invariance(record):
    rng = random.Random(SEED)
    worst, failures, checks = 0.0, 0, 0
    for _ in range(INVARIANCE_POINTS):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.6))
        z0 = rng.uniform(-0.45, 0.45) + rng.uniform(0.05, 0.95) * tau
        cfg = NumConfig(tau=tau, tol=INVARIANCE_TOL)
        for name in ("Psi1", "Psi2"):
            for r in invariance_check(name, z0, cfg):
                checks += 1
                err = float(r.notes[0].split()[-1])
                worst = max(worst, err)
                failures += not r.passed
    ok = failures == 0
    detail = f"{checks - failures}/{checks} within {INVARIANCE_TOL:g}, worst error {worst:.2e}"
    record(7, ok, "numeric invariance of Psi1, Psi2", detail)
    assert ok, detail


# 8 ------------------------------------------------------------------------------------

TAUS = (0.3 + 1.2j, 1j, -0.4 + 0.8j)
# |q| = 0.05 exactly, and a smaller |q|
CROSS_TAUS = (0.25 + 0.47679j, 0.1 + 0.7j)
CROSS_ANGLES = (0.0, 0.7, 2.0, -2.5)


def test_criterion_8_periods_legendre_cross(curve, record):
    per_err = leg_err = cross_err = 0.0
    ok = True
    for tau in TAUS:
        cfg = NumConfig(tau=tau, tol=LEGENDRE_TOL)
        got = period_quadrature(None, cfg)
        e = max(abs(g - w) for g, w in zip(got, (1, tau, 0, 1)))
        per_err = max(per_err, e)
        leg = legendre_check(cfg)[0]
        leg_err = max(leg_err, float(leg.notes[1].split()[-1]))
        ok &= e <= PERIOD_TOL and leg.passed
    for tau in CROSS_TAUS:
        cfg = NumConfig(tau=tau, tol=CROSS_TOL)
        assert abs(cfg.q) <= 0.05
        for a in CROSS_ANGLES:
            for r in cross_check(curve, 0.1 * cmath.exp(1j * a), cfg):
                cross_err = max(cross_err, float(r.notes[2].split()[-1]))
                ok &= r.passed
    detail = (f"periods err {per_err:.1e} (tol {PERIOD_TOL:g}), Legendre err {leg_err:.1e} "
              f"(tol {LEGENDRE_TOL:g}) at {len(TAUS)} taus; cross-check err {cross_err:.1e} "
              f"(tol {CROSS_TOL:g})")
    record(8, ok, "periods, Legendre relation, symbolic-numeric cross-check", detail)
    assert ok, detail
