import csv
import io
import json

import pytest

from ospnlie import cli


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_solve_text():
    code, out, _ = run(["solve", "--s", "1", "--J", "-1", "--T", "2"])
    assert code == 0
    rec = dict(line.split(" = ") for line in out.strip().splitlines())
    assert set(rec) >= {"f", "S", "C", "iterations", "residual"}
    assert float(rec["f"]) == pytest.approx(-2.4213659943406678, abs=1e-12)
    assert float(rec["residual"]) < 1e-12


def test_solve_json_seventeen_digits():
    code, out, _ = run(["solve", "--T", "2", "--out", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["f"] == pytest.approx(-2.4213659943406678, abs=1e-12)
    assert '"f": -2.42136599434066' in out and len(out.split('"f": ')[1].split(",")[0].lstrip("-").replace(".", "")) == 17


def test_hte_json_exact():
    code, out, _ = run(["hte", "--order", "3", "--out", "json"])
    assert code == 0
    coeffs = json.loads(out)["coefficients"]
    assert [c["f_over_t"] for c in coeffs] == ["-5/27", "-172/243", "20296/59049"]
    assert coeffs[1]["C"] == "344/243"


def test_hte_ansatz_output():
    code, out, _ = run(["hte", "--order", "2", "--ansatz", "--out", "json"])
    assert code == 0
    a1 = json.loads(out)["ansatz"][0]
    assert a1 == {"n": 1, "b": ["-2/3"], "c": ["-1/3"]}


def test_specific_heat_csv_series_column(hte13):
    code, out, _ = run(["specific-heat", "--T-min", "3", "--T-max", "5", "--points", "2", "--out", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.splitlines()[0] == "T,C_series,C_pade"
    assert float(rows[-1]["T"]) == 5.0
    assert float(rows[-1]["C_series"]) == hte13.specific_heat_value(5.0, -1.0, 12)


def test_sweep_header_and_determinism(tmp_path):
    argv = ["sweep", "--T-min", "2", "--T-max", "4", "--points", "3", "--out", "csv"]
    code, first, _ = run(argv)
    assert code == 0
    assert first.splitlines()[0] == "T,f,S,C_series,C_pade,C_nlie"
    assert len(first.splitlines()) == 4
    _, second, _ = run(argv + ["--workers", "2"])
    assert first == second


def test_sweep_json_schema():
    code, out, _ = run(["sweep", "--T-min", "3", "--T-max", "3", "--points", "1", "--out", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["columns"] == ["T", "f", "S", "C_series", "C_pade", "C_nlie"]
    assert len(doc["rows"]) == 1


def test_sweep_other_rank_omits_series():
    code, out, _ = run(["sweep", "--s", "2", "--T-min", "3", "--T-max", "3", "--points", "1", "--out", "csv"])
    assert code == 0 and out.splitlines()[0] == "T,f,S,C_nlie"


def test_finite_n_cross_check():
    code, out, _ = run(["finite-n", "--T", "2", "--N", "2", "--out", "json"])
    doc = json.loads(out)
    assert code == 0
    assert doc["T1_at_0"] == pytest.approx(17 / 3, abs=1e-12)
    assert doc["qtm_normalized"] == pytest.approx(doc["T1_at_0"], abs=1e-12)


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# grid\nT-min = 3\nT-max = 5   # upper end\npoints = 3\nout = csv\n")
    code, out, _ = run(["specific-heat", "--config", str(cfg), "--points", "2"])
    assert code == 0
    assert len(out.splitlines()) == 3


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(["hte", "--config", str(cfg)])
    assert code == 2
    assert json.loads(err)["error"]["kind"] == "usage"


def test_output_file(tmp_path):
    path = tmp_path / "hte.csv"
    code, out, _ = run(["hte", "--order", "2", "--out", "csv", "--output", str(path)])
    assert code == 0 and out == ""
    assert path.read_text().splitlines()[1].startswith("1,-5/27,")


@pytest.mark.parametrize("argv", [
    ["solve"],
    ["solve", "--T", "2", "--bogus"],
    ["finite-n", "--T", "2"],
    ["finite-n", "--T", "2", "--N", "3"],
    ["solve", "--T", "-1"],
    ["solve", "--T", "1", "--r", "0.3"],
    ["specific-heat", "--s", "2"],
    ["nonsense"],
])
def test_usage_errors(argv):
    code, _, err = run(argv)
    assert code == 2
    rec = json.loads(err)["error"]
    assert rec["kind"] == "usage" and rec["message"]


def test_nonconvergence_exit_code():
    code, _, err = run(["solve", "--T", "1", "--max-iter", "3"])
    assert code == 3
    rec = json.loads(err)["error"]
    assert rec["module"] == "nlie-core" and rec["quantity"]


def test_verify_exit_codes(monkeypatch):
    code, out, _ = run(["verify", "--suite", "qsystem"])
    assert code == 0 and out.startswith("PASS")
    fail = [cli.verify.Check("qsystem", "forced", False, 1.0, 0.5)]
    monkeypatch.setitem(cli.verify.SUITES, "qsystem", lambda: fail)
    code, out, _ = run(["verify", "--suite", "qsystem"])
    assert code == 4 and out.startswith("FAIL")
