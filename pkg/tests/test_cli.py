import csv
import io
import json
import math
import subprocess
import sys

import pytest

from lemniwedge.cli import SCHEMA_VERSION, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_body(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    manifest = json.loads(lines[0][2:])
    return manifest, list(csv.reader(io.StringIO("\n".join(lines[1:]))))


def test_eval_json_record(capsys):
    code, out, _ = run(capsys, "eval", "--zeta", "2.0,0.5")
    assert code == 0
    doc = json.loads(out)
    m = doc["manifest"]
    assert m["schema_version"] == SCHEMA_VERSION and m["command"] == "eval"
    assert m["cfg"]["eps"] == 1e-3 and m["cfg"]["theta_i"] == pytest.approx(math.pi / 2)
    r = doc["result"]
    for k in ("Q_scat", "Q_total", "u", "t", "Y"):
        assert len(r[k]) == 2
    t, Y = complex(*r["t"]), complex(*r["Y"])
    assert abs(Y * Y - 2 * (t ** 4 + 1)) < 1e-12


def test_eval_gauge_and_split(capsys):
    _, out, _ = run(capsys, "eval", "--zeta", "1.0,30")
    assert abs(complex(*json.loads(out)["result"]["Q_scat"])) < 1e-8
    zi = complex(math.pi / 2, 1e-3)
    z = zi + 1e-3
    _, out, _ = run(capsys, "eval", "--zeta", f"{z.real!r},{z.imag!r}")
    r = json.loads(out)["result"]
    qs, qt = complex(*r["Q_scat"]), complex(*r["Q_total"])
    assert abs(qs) < 10
    assert qt - qs == pytest.approx(1 / (z - zi), rel=1e-9)


def test_eval_csv(capsys):
    code, out, _ = run(capsys, "eval", "--zeta", "2.0,0.5", "--format", "csv")
    manifest, rows = csv_body(out)
    assert code == 0 and manifest["format"] == "csv"
    assert rows[0] == ["quantity", "re", "im"]
    assert [r[0] for r in rows[1:]] == ["zeta", "t", "Y", "u", "Q_scat", "Q_total"]


def test_eval_deterministic_bytes():
    cmd = [sys.executable, "-m", "lemniwedge.cli", "eval", "--zeta", "2.3,0.4", "--eps", "0.01"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and len(a) > 100


def test_error_names_and_exit_codes(capsys):
    code, _, err = run(capsys, "eval", "--zeta", "1,0")
    assert code == 1 and json.loads(err)["error"] == "UnitModulusRoot"
    code, _, err = run(capsys, "eval", "--zeta", "1,1", "--eps", "0")
    assert code == 1 and json.loads(err)["error"] == "DegenerateEps"
    code, _, err = run(capsys, "eval", "--zeta", "abc")
    assert code == 2 and json.loads(err)["error"] == "UsageError"
    code, _, _ = run(capsys, "eval")
    assert code == 2
    code, _, _ = run(capsys, "eval", "--zeta", "1,1", "--tol-override", "nope=1")
    assert code == 2
    code, _, _ = run(capsys, "eval", "--zeta", "1,1", "--k0", "-1")
    assert code == 2
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_tolerance_override_in_manifest(capsys):
    code, out, _ = run(capsys, "eval", "--zeta", "2,0.5", "--tol-override", "tol_eval=1e-6",
                       "--tol-override", "pole_guard=1e-9")
    tol = json.loads(out)["manifest"]["cfg"]["tol"]
    assert code == 0 and tol["tol_eval"] == 1e-6 and tol["pole_guard"] == 1e-9


def test_tables_has_fifteen_records(capsys):
    code, out, _ = run(capsys, "tables")
    recs = json.loads(out)["records"]
    assert code == 0 and len(recs) == 15
    assert "(0,+,-)" not in {r["label"] for r in recs}
    code, out, _ = run(capsys, "tables", "--format", "csv")
    _, rows = csv_body(out)
    assert len(rows) == 16 and rows[0][0] == "label"


def test_farfield_csv_rows(capsys, tmp_path):
    path = tmp_path / "ff.csv"
    code, out, _ = run(capsys, "farfield", "--grid", "1.0:5.0:9", "--format", "csv", "-o", str(path))
    assert code == 0 and out == ""
    manifest, rows = csv_body(path.read_text())
    assert manifest["grid"] == "1.0:5.0:9"
    assert rows[0] == ["theta", "re_D", "im_D", "flag"]
    assert len(rows) - 1 == 9
    assert [float(r[0]) for r in rows[1:]] == pytest.approx([1.0 + 0.5 * k for k in range(9)])


def test_farfield_flags_not_dropped(capsys):
    code, out, _ = run(capsys, "farfield", "--grid", f"{math.pi - 0.5!r}:{math.pi + 0.5!r}:3")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 3
    assert rows[1]["flag"] == "NearPoleDirection" and rows[1]["D"] is None
    assert rows[0]["flag"] is None and len(rows[0]["D"]) == 2


def test_farfield_bad_grid(capsys):
    assert run(capsys, "farfield", "--grid", "1:2")[0] == 2
    assert run(capsys, "farfield", "--grid", "2:1:5")[0] == 2
    assert run(capsys, "farfield", "--grid", "1:2:0")[0] == 2


def test_reciprocity_small_grid(capsys):
    code, out, _ = run(capsys, "reciprocity", "--grid", "1.1:2.7:3")
    doc = json.loads(out)
    assert code == 0 and doc["max_delta"] > 0
    assert len(doc["delta"]) == 3 and doc["delta"][1][1] == 0


def test_verify_subset_passes_and_is_seed_stable(capsys):
    code, a, _ = run(capsys, "verify", "--only", "1,3,5", "--seed", "7")
    _, b, _ = run(capsys, "verify", "--only", "1,3,5", "--seed", "7")
    assert code == 0 and a == b
    lines = [json.loads(x) for x in a.splitlines()]
    assert "manifest" in lines[0] and lines[-1]["summary"]["passed"]
    assert [x["criterion"] for x in lines[1:-1]] == [1, 3, 5]


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--only", "4", "--inject-fault", "(1,+,-)")
    summary = json.loads(out.splitlines()[-1])["summary"]
    assert code == 1 and not summary["passed"]
    assert summary["failed"] == [dict(check="table_oracle_equivalence", criterion=4,
                                      parts=["table_vs_modes_rel"])]


def test_verify_full_run_fails_only_on_eps_stability(capsys):
    code, out, _ = run(capsys, "verify")
    summary = json.loads(out.splitlines()[-1])["summary"]
    assert code == 1
    assert summary["n_checks"] == 12
    assert summary["failed"] == [dict(check="far_field", criterion=12,
                                      parts=["eps_extrapolation_stability"])]


def test_non_finite_values_are_refused():
    from lemniwedge.cli import NonFiniteOutput, _dump_json
    with pytest.raises(NonFiniteOutput):
        _dump_json({"a": [1.0, float("nan")]})
    assert json.loads(_dump_json({"a": [1.0, None]})) == {"a": [1.0, None]}
