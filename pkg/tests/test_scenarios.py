import pytest

from eulerfv.grid import StructMesh
from eulerfv.scenarios import (ScenarioError, UnknownScenario, builtin, dump_scenario, initial_field,
                               load_scenario, names, parse_scenario)

QUAD = """
name: quad
dim: 2
t_final: 0.1
regions:
  - {where: "x > 0.5, y > 0.5", rho: 1.0, u: 0.0, v: 0.0, p: 1.0}
  - {where: "x < 0.5, y > 0.5", rho: 2.0, u: 0.0, v: 0.0, p: 1.0}
  - {where: "x < 0.5, y < 0.5", rho: 3.0, u: 0.0, v: 0.0, p: 1.0}
  - {where: "x > 0.5, y < 0.5", rho: 4.0, u: 0.0, v: 0.0, p: 1.0}
"""


def test_builtin_catalog():
    assert names() == ["single-c", "single-r", "single-s", "double-r", "sod",
                       "2d-rarefactions", "2d-contacts", "2d-shocks", "2d-mixed"]
    with pytest.raises(UnknownScenario):
        builtin("nope")
    sod = builtin("sod")
    left, right, x0 = sod.riemann_data()
    assert (left.rho, right.rho, x0) == (1.0, 0.125, 0.5)
    with pytest.raises(ScenarioError):
        builtin("2d-shocks").riemann_data()


@pytest.mark.parametrize("name", ["sod", "2d-mixed", "single-r"])
def test_builtins_round_trip_through_yaml(name):
    s = builtin(name)
    assert parse_scenario(dump_scenario(s)) == s


def test_initial_field_mass():
    s = builtin("sod")
    for n in (8, 7):
        cf = initial_field(s, s.mesh(n))
        assert cf.totals()[0] == pytest.approx(0.5625, rel=1e-14)
        assert cf.meta["aligned"] is (n == 8)
    cf = initial_field(builtin("2d-shocks"), StructMesh((4, 4)))
    assert cf.rho[3, 3] == 1.5 and cf.rho[0, 0] == 0.138


def test_quadrant_document(tmp_path):
    path = tmp_path / "quad.yaml"
    path.write_text(QUAD)
    s = load_scenario(path)
    cf = initial_field(s, s.mesh(5))
    assert cf.totals()[0] == pytest.approx(2.5)
    assert cf.rho[2, 2] == pytest.approx(2.5)
    assert s.reference == "fine:256"


@pytest.mark.parametrize("edit, message", [
    (lambda t: t.replace("rho: 4.0", "rho: -4.0"), "regions[3]"),
    (lambda t: t.replace("x > 0.5, y < 0.5", "x > 0.4, y < 0.5"), "overlap"),
    (lambda t: t.replace("x > 0.5, y < 0.5", "x > 0.6, y < 0.5"), "cover"),
    (lambda t: t.replace("dim: 2", "dim: 4"), "dim"),
    (lambda t: t.replace("t_final: 0.1", "t_final: 0.1\ncolour: red"), "colour"),
    (lambda t: t.replace(", v: 0.0, p: 1.0}", ", p: 1.0}", 1), "missing"),
    (lambda t: "[1, 2", "valid"),
], ids=["negative-density", "overlap", "gap", "bad-dim", "unknown-key", "missing-velocity", "bad-yaml"])
def test_bad_documents(edit, message):
    with pytest.raises(ScenarioError, match=message.replace("[", r"\[")):
        parse_scenario(edit(QUAD))
