import csv

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eulerfv.gas import GasLaw, PrimState, cons_from_prim
from eulerfv.grid import CellField, StructMesh, project
from eulerfv.riemann import VacuumFormation
from eulerfv.scheme import (MonitorViolation, RunConfig, Scheme, compute_dt, ghost_state, godunov_flux,
                            jump_sums, physical_flux, run, stats_columns, step, uniform_boundaries,
                            vfv_flux, write_stats)


def U(rho, vel, p, gas=GasLaw()):
    return cons_from_prim(PrimState(rho, vel, p), gas).to_array()


def advection_field(n, dim=1):
    """Smooth density wave moving with constant velocity and pressure."""
    gas = GasLaw()

    def f(*x):
        rho = 1.0 + 0.1 * np.sin(2 * np.pi * sum(x))
        vel = np.stack([np.full_like(rho, 1.0)] + [np.full_like(rho, 0.5)] * (dim - 1))
        return cons_from_prim(PrimState(rho, vel, np.ones_like(rho)), gas).to_array()

    return project(f, StructMesh((n,) * dim), subsamples=4)


def test_scheme_validation():
    with pytest.raises(ValueError):
        Scheme("muscl")
    with pytest.raises(ValueError):
        Scheme("vfv", epsilon=0.0)
    assert "standin" in Scheme("vfv").label
    with pytest.raises(ValueError):
        RunConfig(t_final=1.0, cfl=1.0)


@pytest.mark.parametrize("axis", [0, 1])
def test_fluxes_consistent_on_equal_states(gas, axis):
    a = U(0.8, [0.3, -1.2], 2.0)
    np.testing.assert_allclose(godunov_flux(a, a, axis, gas), physical_flux(a, axis, gas), rtol=0, atol=0)
    np.testing.assert_allclose(vfv_flux(a, a, axis, gas, 0.01), physical_flux(a, axis, gas), rtol=1e-15)


def test_godunov_sod_face_flux(gas):
    F = godunov_flux(U(1.0, [0.0], 1.0), U(0.125, [0.0], 0.1), 0, gas)
    # the face sits inside the left rarefaction fan
    assert F[0] > 0 and F[1] > 0 and F[2] > 0


def test_wall_face_has_no_mass_flux(gas):
    inner = U(1.0, [2.0, 3.0], 1.0)
    ghost = ghost_state(inner, "reflective", 0)
    np.testing.assert_allclose(ghost[1:3] / ghost[0], [-2.0, 3.0])
    F = godunov_flux(inner, ghost, 0, gas)
    assert abs(F[0]) < 1e-13 and abs(F[3]) < 1e-13
    np.testing.assert_array_equal(ghost_state(inner, "transmissive", 0), inner)
    with pytest.raises(ValueError):
        ghost_state(inner, "periodic", 0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 3), st.floats(-1, 1), st.floats(-1, 1), st.floats(0.1, 3),
       st.floats(0.1, 3), st.floats(-1, 1), st.floats(-1, 1), st.floats(0.1, 3))
def test_godunov_flux_rotation_equivariant(r1, u1, v1, p1, r2, u2, v2, p2):
    gas = GasLaw()
    a, b = U(r1, [u1, v1], p1), U(r2, [u2, v2], p2)
    swap = [0, 2, 1, 3]
    Fx = godunov_flux(a, b, 0, gas)
    Fy = godunov_flux(a[swap], b[swap], 1, gas)
    np.testing.assert_allclose(Fy[swap], Fx, rtol=1e-12, atol=1e-14)


def test_vacuum_propagates_from_step(gas):
    data = np.stack([U(1.0, [-5.0], 0.4), U(1.0, [5.0], 0.4)], axis=1)
    cf = CellField(StructMesh((2,)), data)
    with pytest.raises(VacuumFormation):
        step(cf, Scheme(), uniform_boundaries("transmissive", 1), 1e-3, gas)


def test_dt_rules(gas):
    cf = advection_field(8, dim=2)
    c = np.sqrt(1.4 * 1.0 / cf.rho)
    expect_sum = 0.5 / np.max((1.0 + c) * 8 + (0.5 + c) * 8)
    assert compute_dt(cf, 0.5, gas) == pytest.approx(expect_sum)
    assert compute_dt(cf, 0.5, gas, rule="axis-min") == pytest.approx(0.5 / 8 / np.max(1.0 + c))
    assert compute_dt(cf, 0.5, gas, t_remaining=1e-6) == 1e-6
    with pytest.raises(ValueError):
        compute_dt(cf, 0.5, gas, rule="other")


@pytest.mark.parametrize("scheme", [Scheme(), Scheme("vfv")])
def test_periodic_run_conserves_all_totals(scheme):
    cf = advection_field(32, dim=2)
    out, hist = run(RunConfig(0.1, scheme, "periodic", cfl=0.4), cf)
    np.testing.assert_allclose(out.totals(), cf.totals(), rtol=1e-12)
    assert hist[-1].time == pytest.approx(0.1, abs=1e-15) and out.time == hist[-1].time


def test_reflective_box_conserves_mass_and_energy(gas):
    mesh = StructMesh((64,))
    data = np.where(mesh.centers(0) < 0.5, U(1.0, [0.0], 1.0)[:, None], U(0.125, [0.0], 0.1)[:, None])
    cf = CellField(mesh, data)
    out, _ = run(RunConfig(0.4, Scheme(), "reflective"), cf)
    t0, t1 = cf.totals(), out.totals()
    assert t1[0] == pytest.approx(t0[0], rel=1e-12)
    assert t1[2] == pytest.approx(t0[2], rel=1e-12)


def test_advection_converges_first_order():
    errors = []
    for n in (64, 128, 256):
        cf = advection_field(n)
        out, _ = run(RunConfig(0.5, Scheme(), "periodic"), cf)
        # after half a period the profile has shifted by half the box
        exact = np.roll(cf.rho, n // 2)
        errors.append(np.sqrt(np.sum((out.rho - exact) ** 2) / n))
    rates = np.log2(np.array(errors[:-1]) / errors[1:])
    assert np.all(rates >= 0.8)


def test_jump_sums():
    mesh = StructMesh((16,))
    assert jump_sums(CellField(mesh, np.ones((3, 16)))) == (0.0, 0.0)
    values = {}
    for n in (16, 32):
        mesh = StructMesh((n,))
        data = np.ones((3, n))
        data[0, n // 2:] = 3.0
        values[n] = jump_sums(CellField(mesh, data))
    assert values[16][0] == values[32][0] == 2.0
    assert values[32][1] == pytest.approx(2 * values[16][1])
    mesh = StructMesh((4, 4))
    data = np.ones((4, 4, 4))
    data[0, 2:, :] = 2.0
    l1, l2h = jump_sums(CellField(mesh, data))
    assert l1 == pytest.approx(1.0) and l2h == pytest.approx(4.0)


def test_monitor_reports_cell(gas):
    cf = advection_field(8)
    cf.data[0, 3] = -1.0
    with pytest.raises(MonitorViolation) as info:
        run(RunConfig(0.1), cf)
    assert info.value.cell == (3,)


def test_stats_csv(tmp_path):
    cf = advection_field(16, dim=2)
    _, hist = run(RunConfig(0.05, Scheme(), "periodic", stats_every=2), cf)
    path = tmp_path / "stats.csv"
    write_stats(hist, 2, path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == stats_columns(2) == ["t", "dt", "smax", "rho_min", "p_min", "E_max", "jump_l1",
                                           "jump_l2h", "mass", "momx", "momy", "energy"]
    times = [float(r[0]) for r in rows[1:]]
    assert times[0] == 0.0 and times[-1] == pytest.approx(0.05) and times == sorted(times)
