import io
import json
import math
import sys

import pytest

from influence_lab import cli
from influence_lab.truthtable import builtin, write_table


def run_cli(*argv):
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = cli.main(list(argv))
    finally:
        sys.stdout = old
    return code, buf.getvalue()


def run_json(*argv):
    code, out = run_cli(*argv)
    assert code == 0, out
    return json.loads(out)


def test_analyze_schema_and_consistency():
    report = run_json("analyze", "--expr", "parity(8)", "--eps", "0")
    assert set(report) == {
        "schema",
        "input",
        "measures",
        "spectrum",
        "bounds",
        "approx_degree",
        "timing_ms",
    }
    assert report["schema"] == 1
    assert report["timing_ms"] == {}
    m, b = report["measures"], report["bounds"]
    assert m["rho"] == "1"
    assert b["query_influence"]["value"] == 4.0  # (1 - 0)/2 * 1 * 8
    assert report["spectrum"]["degree"] == 8
    # internal cross-consistency
    assert m["avg_sensitivity_float"] == pytest.approx(
        m["rho_float"] * report["input"]["n"], abs=1e-12
    )
    eps = b["eps"]
    expected = max(0.0, (1 - 2 * math.sqrt(eps)) / 2 * m["rho_float"] * report["input"]["n"])
    assert b["query_influence"]["value"] == pytest.approx(expected, abs=1e-12)


def test_analyze_iterated_family():
    report = run_json("analyze", "--expr", "iterate(paper_f,2)")
    assert report["measures"]["avg_sensitivity_float"] == 6.25
    assert report["measures"]["block_sensitivity"]["value"] == 9
    assert report["measures"]["block_sensitivity"]["exact"] is True


def test_analyze_constant_zero():
    report = run_json("analyze", "--expr", "0")
    m = report["measures"]
    assert m["rho_float"] == 0.0
    assert m["avg_sensitivity_float"] == 0.0
    assert m["max_sensitivity"] == 0
    assert m["block_sensitivity"]["value"] == 0
    b = report["bounds"]
    assert b["query_influence"]["value"] == 0.0
    assert b["degree_influence"] == 0.0
    assert b["query_block_sensitivity"] == 0.0


def test_analyze_no_bs_flag():
    report = run_json("analyze", "--expr", "parity(4)", "--no-bs")
    assert report["measures"]["block_sensitivity"] is None
    assert report["measures"]["bs_skipped"] == "disabled"


def test_analyze_bs_autoskip_above_cap():
    report = run_json("analyze", "--expr", "parity(17)")
    assert report["measures"]["block_sensitivity"] is None
    assert "exceeds exact cap" in report["measures"]["bs_skipped"]


def test_analyze_dump_spectrum():
    report = run_json("analyze", "--expr", "parity(3)", "--dump-spectrum")
    assert report["spectrum"]["entries"] == [{"s": 7, "coeff_num": 8, "coeff_den": 8}]


def test_analyze_table_file(tmp_path):
    path = tmp_path / "t.json"
    write_table(builtin("majority", 3), path)
    report = run_json("analyze", "--table", str(path))
    assert report["input"]["table_file"] == str(path)
    assert report["measures"]["rho"] == "1/2"


def test_analyze_determinism_bytes():
    _, out1 = run_cli("analyze", "--expr", "maj(x0,x1,x2)", "--approx-degree")
    _, out2 = run_cli("analyze", "--expr", "maj(x0,x1,x2)", "--approx-degree")
    assert out1 == out2


def test_analyze_usage_errors():
    code, _ = run_cli("analyze", "--expr", "x0", "--table", "/nonexistent")
    assert code == 2
    code, _ = run_cli("analyze", "--expr", "x0 ^^ x1")
    assert code == 2
    code, _ = run_cli("analyze", "--table", "/nonexistent/file.json")
    assert code == 2


def test_analyze_capacity_exit():
    code, _ = run_cli("analyze", "--expr", "parity(21)")
    assert code == 3


def test_bad_table_file_is_usage_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"version":1,"n":2,"bits":"zz"}')
    code, _ = run_cli("analyze", "--table", str(path))
    assert code == 2


def test_approx_degree_command():
    report = run_json("approx-degree", "--expr", "or(2)", "--eps", "0.3333333333")
    assert report["degree"] == 1
    assert report["achieved_error"] <= 1 / 3
    assert report["exact_degree"] == 2
    assert all(e["s"] in (0, 1, 2) for e in report["polynomial"])
    report = run_json("approx-degree", "--expr", "parity(4)")
    assert report["degree"] == 4


def test_simulate_parity_tightness():
    report = run_json("simulate", "--algorithm", "parity", "--n", "4")
    assert report["queries"] == 2
    assert report["worst_error"] < 1e-9
    assert report["influence_bound"]["tight"] is True
    assert report["gap"]["violated"] is False
    assert max(report["support_history"]) <= report["queries"] + 1


def test_simulate_serial_with_expr():
    report = run_json(
        "simulate", "--algorithm", "serial", "--n", "3", "--expr", "maj(x0,x1,x2)"
    )
    assert report["queries"] == 3
    assert report["worst_error"] < 1e-9
    assert len(report["per_oracle_error"]) == 8
    for entry in report["displacement"]:
        assert entry["lower_bound"] - 1e-9 <= entry["value"] <= entry["upper_bound"] + 1e-9


def test_simulate_grover():
    report = run_json(
        "simulate", "--algorithm", "grover", "--n", "4", "--iterations", "1"
    )
    assert report["queries"] == 2
    errors = report["per_oracle_error"]
    assert errors[0] < 1e-9
    for i in range(4):
        assert errors[1 << i] < 1e-9


def test_simulate_usage():
    code, _ = run_cli("simulate", "--algorithm", "serial", "--n", "3")
    assert code == 2  # serial needs a target function
    code, _ = run_cli("simulate", "--algorithm", "parity", "--n", "4", "--expr", "parity(6)")
    assert code == 2  # n mismatch


def test_verify_all_passes(capsys):
    code = cli.main(["verify", "--suite", "all", "--n-max", "4", "--samples", "4"])
    out = capsys.readouterr().out
    assert code == 0
    assert "FAIL" not in out
    assert out.strip().endswith("checks passed")


def test_verify_inject_fault_exits_nonzero(capsys):
    code = cli.main(
        ["verify", "--suite", "fourier", "--n-max", "3", "--samples", "2", "--inject-fault"]
    )
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL" in out
    assert "counterexample" in out


def test_text_format_runs():
    code, out = run_cli("analyze", "--expr", "x0 & x1", "--format", "text")
    assert code == 0
    assert "measures.rho" in out
