import json
import subprocess
import sys
from fractions import Fraction

import pytest

from rackrepair.cli import main
from rackrepair.grs_code import dump_codeword, encode
from rackrepair.polyring import Poly
from rackrepair.rack_engine import load_scheme

ADDITIVE = ["--family", "additive", "--p0", "2", "--t", "6", "--ell", "3", "--k", "32"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ff(capsys):
    code, out, _ = run(capsys, "ff", "--p0", "2", "--t", "4")
    assert code == 0
    assert "x^4 + x + 1" in out
    assert "degree 1 " in out and "degree 2 " in out and "degree 4 " in out
    code, out, _ = run(capsys, "ff", "--p0", "2", "--t", "1")
    assert code == 0 and "prime field" in out
    code, _, err = run(capsys, "ff", "--p0", "4", "--t", "2")
    assert code == 2 and "not prime" in err
    code, _, err = run(capsys, "ff", "--p0", "2", "--t", "2", "--modulus", "1,0,1")
    assert code == 2


def test_cutset(capsys):
    code, out, _ = run(capsys, "cutset", "--n", "64", "--k", "32", "--r", "4", "--d", "3",
                       "--q", "64", "--base", "2")
    assert code == 0 and json.loads(out)["symbols"] == "9" and json.loads(out)["bits"] == "9"
    _, out, _ = run(capsys, "cutset", "--n", "63", "--k", "36", "--r", "7", "--d", "6", "--q", "64")
    assert json.loads(out)["symbols"] == "12"


def test_scheme_build_and_repair_run(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, out, _ = run(capsys, "scheme", "build", *ADDITIVE, "--out", str(path))
    assert code == 0
    assert json.loads(out)["h_degrees"] == [16] * 6
    sch = load_scheme(path.read_text())
    assert json.loads(path.read_text())["validation"]["passed"]
    code, out, _ = run(capsys, "repair", "run", "--scheme", str(path), "--trials", "100")
    rep = json.loads(out)
    assert code == 0
    assert (rep["failures"], rep["bandwidth_symbols"], rep["cutset_symbols"], rep["optimal"]) \
        == (0, 9, 9, True)
    assert rep["trials"] == 100 and rep["observed_bandwidths"] == [9]
    assert sch.k == 32


def test_scheme_build_errors(capsys):
    code, _, err = run(capsys, "scheme", "build", "--family", "additive", "--p0", "2", "--t", "5",
                       "--ell", "3", "--k", "32")
    assert code == 2 and "t must be even" in err
    code, out, err = run(capsys, "scheme", "build", "--family", "multiplicative", "--p0", "2",
                         "--t", "6", "--a", "3", "--ell", "4", "--k", "36")
    assert code == 3
    rep = json.loads(out)
    assert rep["status"] == "no-admissible-subspace" and rep["best_degree"] == 27
    code, _, err = run(capsys, "scheme", "build", "--family", "additive")
    assert code == 2 and "missing" in err


def test_gw_report_not_optimal(capsys):
    code, out, _ = run(capsys, "repair", "run", "--family", "gw", "--p0", "2", "--t", "4",
                       "--k", "8", "--trials", "5")
    rep = json.loads(out)
    assert code == 0
    assert rep["bandwidth_symbols"] == 15 and rep["optimal"] is False
    assert rep["cutset_bits"] == "15/2" and rep["cutset_bits_float"] == 7.5
    assert rep["optimal"] == (Fraction(rep["bandwidth_symbols"]) == Fraction(rep["cutset_symbols"]))


def test_tampered_codeword(capsys, tmp_path):
    path = tmp_path / "s.json"
    run(capsys, "scheme", "build", *ADDITIVE, "--out", str(path))
    sch = load_scheme(path.read_text())
    w = encode(sch.code, Poly(sch.tower, [1, 2, 3]))
    good = tmp_path / "good.txt"
    good.write_text(dump_codeword(sch.code, w))
    code, out, _ = run(capsys, "repair", "run", "--scheme", str(path), "--codeword", str(good))
    assert code == 0 and json.loads(out)["failures"] == 0
    syms = list(w.symbols)
    syms[9] ^= 1
    bad = tmp_path / "bad.txt"
    bad.write_text(dump_codeword(sch.code, type(w)(tuple(syms))))
    code, _, err = run(capsys, "repair", "run", "--scheme", str(path), "--codeword", str(bad))
    assert code == 4 and "not a codeword" in err


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"family": "gw", "p0": 2, "t": 4, "k": 8, "trials": 3,
                               "format": "csv"}))
    code, out, _ = run(capsys, "repair", "run", "--config", str(cfg))
    assert code == 0 and out.startswith("family,") and ",gw," not in out.splitlines()[0]
    code, out, _ = run(capsys, "repair", "run", "--config", str(cfg), "--k", "4", "--format", "json")
    assert json.loads(out)["k"] == 4


def test_repair_exhaustive_and_csv(capsys, tmp_path):
    out_path = tmp_path / "r.csv"
    code, _, _ = run(capsys, "repair", "exhaustive", "--family", "two-coset", "--p0", "2",
                     "--t", "2", "--base-degree", "2", "--n", "6", "--k", "4", "--trials", "5",
                     "--format", "csv", "--out", str(out_path))
    assert code == 0
    header, row = out_path.read_text().splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert rec["bandwidth_symbols"] == "7" and rec["bandwidth_bits"] == "14"


def test_sweep_rows_and_determinism(capsys, tmp_path):
    grid = tmp_path / "g.json"
    grid.write_text(json.dumps({"family": "additive", "p0": 2, "t": [4, 6], "ell": [2, 3]}))
    code, first, _ = run(capsys, "sweep", "--config", str(grid), "--format", "csv")
    assert code == 0
    rows = first.strip().splitlines()
    assert len(rows) == 5
    status = [r.split(",")[13] for r in rows[1:]]
    assert status == ["no-subspace", "ok", "infeasible", "ok"]
    _, second, _ = run(capsys, "sweep", "--config", str(grid), "--format", "csv")
    _, parallel, _ = run(capsys, "sweep", "--config", str(grid), "--format", "csv", "--jobs", "2")
    assert first == second == parallel
    empty = tmp_path / "e.json"
    empty.write_text(json.dumps({"family": "additive", "t": []}))
    _, out, _ = run(capsys, "sweep", "--config", str(empty), "--format", "csv")
    assert out.count("\n") == 1 and out.startswith("family,")


def test_json_reports_are_deterministic_apart_from_timing(capsys):
    args = ("repair", "run", "--family", "additive", "--p0", "2", "--t", "4", "--ell", "3",
            "--k", "3", "--trials", "4", "--seed", "7")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    ja, jb = json.loads(a), json.loads(b)
    ja.pop("duration_s"), jb.pop("duration_s")
    assert ja == jb


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rackrepair", "cutset", "--n", "16", "--k", "8",
                           "--r", "16", "--d", "15", "--q", "16"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["symbols"] == "15/2"
