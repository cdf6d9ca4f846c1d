import json

import pytest

from supercurve.cli import (
    EXIT_FAIL,
    EXIT_INSUFFICIENT,
    EXIT_OK,
    EXIT_USAGE,
    Report,
    build_parser,
    main,
    run,
)
from supercurve.report import CheckResult
from supercurve.scalars import Verdict

SMALL = ["--order-q", "6", "--order-z", "8"]


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_exits_zero(capsys):
    code, out, _ = cli(capsys, "verify", "--quiet", *SMALL)
    assert code == EXIT_OK
    assert "summary:" in out and "FAIL" not in out


def test_verify_prints_errata_notes(capsys):
    code, out, _ = cli(capsys, "verify", "--sections", "cohomology", "--no-numeric", *SMALL)
    assert code == EXIT_OK
    assert "[ERRATUM] coker-Dt-xpsi" in out
    assert "note:" in out


def test_verify_insufficient_at_low_order(capsys):
    code, out, _ = cli(capsys, "verify", "--quiet", "--sections", "geometry",
                       "--order-q", "4", "--order-z", "8")
    assert code == EXIT_INSUFFICIENT
    assert "INSUFFICIENT" in out


def test_verify_parallel_matches_serial(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "--quiet", "--no-numeric", "--json", str(a), *SMALL])
    main(["verify", "--quiet", "--no-numeric", "--jobs", "3", "--json", str(b), *SMALL])
    capsys.readouterr()
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    assert [r["id"] for r in ra["results"]] == [r["id"] for r in rb["results"]]
    assert [r["status"] for r in ra["results"]] == [r["status"] for r in rb["results"]]


def test_unknown_section_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--sections", "topology"])
    assert info.value.code == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["verify", "--tau", "0,-1"],
    ["verify", "--depth", "1"],
    ["verify", "--order-q", "x"],
    ["verify", "--tol", "0"],
    ["eval", "wp"],
    ["frobnicate"],
])
def test_bad_arguments(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


def test_expand_named(capsys):
    code, out, _ = cli(capsys, "expand", "Psi1", "--terms", "3", *SMALL)
    assert code == EXIT_OK
    assert "theta" in out and "O(z^" in out


def test_expand_expression(capsys):
    code, out, _ = cli(capsys, "expand", "x^3", "--terms", "1", *SMALL)
    assert code == EXIT_OK
    assert "z^-6" in out


def test_expand_weierstrass(capsys):
    code, out, _ = cli(capsys, "expand", "wp", "--terms", "2", *SMALL)
    assert code == EXIT_OK and "z^-2" in out


def test_reduce_one(capsys):
    code, out, _ = cli(capsys, "reduce", "1", *SMALL)
    assert code == EXIT_OK
    assert "[s*(1)]" in out


def test_reduce_module_error(capsys):
    code, _, err = cli(capsys, "reduce", "z^-1", *SMALL)
    assert code == EXIT_FAIL
    assert "ResidueObstruction" in err


def test_reduce_depth_error(capsys):
    code, _, err = cli(capsys, "reduce", "x^6", *SMALL)
    assert code == EXIT_FAIL
    assert "DepthExceeded" in err


def test_parse_error_shows_caret(capsys):
    code, _, err = cli(capsys, "reduce", "x^^2")
    assert code == EXIT_USAGE
    lines = err.splitlines()
    assert "column 3" in lines[0]
    assert lines[-1] == "    ^"


def test_unknown_identifier_is_usage_error(capsys):
    code, _, err = cli(capsys, "reduce", "wp*x")
    assert code == EXIT_USAGE and "UnknownIdentifier" in err


def test_gm(capsys):
    code, out, _ = cli(capsys, "gm", *SMALL)
    assert code == EXIT_OK
    assert "nabla_tau(s*Psi1)" in out and "[PASS] gm-matrix" in out


def test_eval(capsys):
    code, out, _ = cli(capsys, "eval", "wp", "--z", "0.2,0.1")
    assert code == EXIT_OK and out.startswith("wp(")
    code, out, _ = cli(capsys, "eval", "Psi1", "--z", "0.2,0.1")
    assert code == EXIT_OK and "theta: 1 +0i" in out


def test_eval_pole(capsys):
    code, _, err = cli(capsys, "eval", "wp", "--z", "0")
    assert code == EXIT_FAIL and "PoleAt" in err


def test_eval_unknown_function(capsys):
    with pytest.raises(SystemExit) as info:
        main(["eval", "sigma", "--z", "0.2"])
    assert info.value.code == EXIT_USAGE


def test_periods(capsys):
    code, out, _ = cli(capsys, "periods", "--tau", "0,1")
    assert code == EXIT_OK
    assert "[PASS] legendre" in out and "[PASS] periods" in out


def test_json_roundtrip(capsys, tmp_path):
    path = tmp_path / "r.json"
    code = main(["gm", "--json", str(path), *SMALL])
    capsys.readouterr()
    d = json.loads(path.read_text())
    assert d["exit_code"] == code == EXIT_OK
    rep = Report.from_json(d)
    assert rep.to_json() == d
    assert rep.config["Nq"] == 6


def test_report_exit_codes():
    ok = CheckResult("a", Verdict.EQUAL)
    err = CheckResult("b", Verdict.UNEQUAL, erratum=True)
    bad = CheckResult("c", Verdict.UNEQUAL)
    unexpected = CheckResult("d", Verdict.EQUAL, erratum=True)
    low = CheckResult("e", Verdict.INSUFFICIENT)
    assert Report("t", {}, [ok, err]).exit_code() == EXIT_OK
    assert Report("t", {}, [ok, bad]).exit_code() == EXIT_FAIL
    assert Report("t", {}, [unexpected]).exit_code() == EXIT_FAIL
    assert Report("t", {}, [ok, low]).exit_code() == EXIT_INSUFFICIENT
    assert Report("t", {}, [bad, low]).exit_code() == EXIT_FAIL
    assert Report("t", {}, [], error="Boom: x").exit_code() == EXIT_FAIL


def test_run_captures_module_errors():
    args = build_parser().parse_args(["reduce", "z^-1", *SMALL])
    import io
    rep = run("reduce", args, io.StringIO())
    assert rep.error.startswith("ResidueObstruction")
    assert "total" in rep.timing
