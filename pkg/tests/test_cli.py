import csv
import json

import numpy as np
import pytest

from eulerfv.cli import EXIT_IO, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from eulerfv.diagnostics import eoc
from eulerfv.grid import read_dump


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "sod" in out and "2d-rarefactions" in out


def test_solve_writes_dump_and_summary(tmp_path, capsys):
    dump, stats = tmp_path / "sod.dat", tmp_path / "sod.csv"
    assert main(["solve", "sod", "--n", "128", "--dump", str(dump), "--stats", str(stats)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "initial totals  0.5625 " in out
    cf, gamma = read_dump(dump)
    assert gamma == 1.4 and cf.mesh.n == (128,) and cf.time == pytest.approx(0.15)
    header = next(csv.reader(open(stats)))
    assert header[:3] == ["t", "dt", "smax"]


def test_solve_vfv_with_custom_cfl(tmp_path, capsys):
    dump = tmp_path / "r.dat"
    assert main(["solve", "single-r", "--n", "64", "--scheme", "vfv", "--cfl", "0.3", "--dump", str(dump)]) == 0
    out = capsys.readouterr().out
    assert "vfv-standin" in out and "cfl 0.3 " in out


def test_solve_errors(tmp_path, capsys):
    assert main(["solve", "nope", "--n", "8"]) == EXIT_USAGE
    assert "sod" in capsys.readouterr().err
    assert main(["solve", "sod", "--n", "8", "--cfl", "1.5"]) == EXIT_USAGE
    assert main(["solve", "sod", "--n", "0"]) == EXIT_USAGE
    assert main(["solve", "--scenario-file", str(tmp_path / "missing.yaml"), "--n", "8"]) == EXIT_IO
    assert main(["solve", "sod", "--n", "8", "--dump", str(tmp_path / "no" / "dir.dat")]) == EXIT_IO
    assert main(["bogus"]) == EXIT_USAGE


def test_solve_reports_monitor_failure(tmp_path, capsys):
    doc = tmp_path / "blast.yaml"
    doc.write_text("""
name: blast
dim: 1
t_final: 0.05
regions:
  - {where: "x < 0.5", rho: 1.0, u: -20.0, p: 0.01}
  - {where: "x > 0.5", rho: 1.0, u: 20.0, p: 0.01}
""")
    assert main(["solve", "--scenario-file", str(doc), "--n", "16", "--dump", str(tmp_path / "b.dat")]) == EXIT_RUNTIME
    assert "runtime failure" in capsys.readouterr().err


def test_convergence_csv_and_json(tmp_path, capsys):
    out = tmp_path / "table.csv"
    assert main(["convergence", "single-r", "--ladder", "32:128", "--ref", "exact", "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert [int(r["n"]) for r in rows] == [32, 64, 128]
    assert float(rows[0]["e_rho"]) == pytest.approx(0.0292, rel=0.12)
    for a, b in zip(rows, rows[1:]):
        assert float(b["ord_RE"]) == pytest.approx(eoc(float(a["e_RE"]), float(b["e_RE"])), rel=1e-15)
    body = json.loads(out.with_suffix(".json").read_text())
    assert body["meta"]["reference"] == "exact:20480"
    first = out.read_bytes()
    assert main(["convergence", "single-r", "--ladder", "32:128", "--ref", "exact", "--out", str(out)]) == 0
    assert out.read_bytes() == first


def test_convergence_usage_errors(tmp_path):
    assert main(["convergence", "sod", "--ladder", "48:96"]) == EXIT_USAGE
    assert main(["convergence", "sod", "--ladder", "32:96"]) == EXIT_USAGE
    assert main(["convergence", "sod", "--ladder", "32"]) == EXIT_USAGE
    assert main(["convergence", "sod", "--ladder", "32:64", "--ref", "coarse"]) == EXIT_USAGE
    assert main(["convergence", "2d-mixed", "--ladder", "16:32", "--ref", "exact"]) == EXIT_USAGE
    assert main(["convergence", "sod", "--ladder", "32:64", "--ref", f"file:{tmp_path}/x.dat"]) == EXIT_IO


def test_convergence_from_dumped_reference(tmp_path):
    ref = tmp_path / "ref.dat"
    assert main(["solve", "2d-rarefactions", "--n", "32", "--dump", str(ref)]) == 0
    out = tmp_path / "t.csv"
    assert main(["convergence", "2d-rarefactions", "--ladder", "8:16", "--ref", f"file:{ref}",
                 "--out", str(out)]) == 0
    assert len(list(csv.DictReader(open(out)))) == 2


def test_riemann_command(tmp_path, capsys):
    assert main(["riemann", "1,0,1", "0.125,0,0.1"]) == 0
    out = capsys.readouterr().out
    assert "p*      0.30313" in out and "u*      0.92745" in out
    assert "rarefaction / contact / shock" in out
    assert main(["riemann", "1,-2,0.4", "1,2,0.4"]) == 0
    u_line = [l for l in capsys.readouterr().out.splitlines() if l.startswith("u*")][0]
    assert abs(float(u_line.split()[1])) < 1e-12
    dump = tmp_path / "p.dat"
    assert main(["riemann", "1,0,1", "1,0,1", "--profile", "0.1", "20", "--dump", str(dump)]) == 0
    cf, _ = read_dump(dump)
    np.testing.assert_allclose(cf.rho, 1.0)


def test_riemann_errors():
    assert main(["riemann", "1,-5,0.4", "1,5,0.4"]) == EXIT_RUNTIME
    assert main(["riemann", "1,0", "1,0,1"]) == EXIT_USAGE
    assert main(["riemann", "-1,0,1", "1,0,1"]) == EXIT_USAGE
