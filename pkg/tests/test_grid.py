import numpy as np
import pytest
from hypothesis import given, strategies as st

from eulerfv.grid import (CellField, MeshMismatch, NonNestedMesh, StructMesh, lp_norm, project,
                          project_scalar, read_dump, refinement_ratio, restrict, restrict_array, write_dump)


def test_mesh_geometry():
    m = StructMesh((4, 8), origin=(0.0, -1.0), extent=(2.0, 4.0))
    assert m.dim == 2 and m.h == (0.5, 0.5) and m.cell_volume == 0.25
    np.testing.assert_allclose(m.edges(1), np.linspace(-1, 3, 9))
    np.testing.assert_allclose(m.centers(0), [0.25, 0.75, 1.25, 1.75])
    assert StructMesh.uniform(16, 2).n == (16, 16)
    with pytest.raises(ValueError):
        StructMesh((0,))
    with pytest.raises(ValueError):
        StructMesh((4,), extent=(-1.0,))


def test_cellfield_shape_checked():
    m = StructMesh((5,))
    with pytest.raises(ValueError):
        CellField(m, np.zeros((4, 5)))
    cf = CellField(m, np.ones((3, 5)))
    np.testing.assert_allclose(cf.totals(), [1, 1, 1])
    assert cf.mom.shape == (1, 5)


def test_project_linear_is_exact():
    m = StructMesh((10,))
    f = lambda x: np.stack([1 + x, 2 * x, 3 + 0 * x])
    cf = project(f, m)
    np.testing.assert_allclose(cf.rho, 1 + m.centers(0), rtol=1e-14)
    np.testing.assert_allclose(project_scalar(lambda x: x, m, 3), m.centers(0), rtol=1e-14)


def test_project_2d_step_counts_overlap():
    m = StructMesh((4, 4))
    vals = project_scalar(lambda x, y: (x < 0.3).astype(float), m, subsamples=10)
    # column 1 straddles x = 0.3: 2 of its 10 sub-columns lie to the left
    np.testing.assert_allclose(vals[0], 1.0)
    np.testing.assert_allclose(vals[1], 0.2, rtol=1e-14)


def test_restrict_preserves_totals(rng):
    fine = StructMesh((16, 8))
    coarse = StructMesh((4, 2))
    cf = CellField(fine, rng.uniform(1, 2, (4, 16, 8)))
    rc = restrict(cf, coarse)
    np.testing.assert_allclose(rc.totals(), cf.totals(), rtol=1e-14)
    assert refinement_ratio(fine, coarse) == (4, 4)


def test_non_nested_meshes_rejected():
    with pytest.raises(NonNestedMesh):
        refinement_ratio(StructMesh((256,)), StructMesh((48,)))
    with pytest.raises(NonNestedMesh):
        refinement_ratio(StructMesh((8,), extent=(2.0,)), StructMesh((4,)))


@given(st.integers(1, 5), st.integers(1, 4))
def test_restrict_constant_is_identity(k, r):
    coarse = StructMesh((k,))
    fine = StructMesh((k * r,))
    out = restrict_array(np.full((3, k * r), 2.5), fine, coarse)
    np.testing.assert_allclose(out, 2.5)


def test_lp_norms():
    m = StructMesh((4,))
    assert lp_norm(np.ones(4), m, 1) == pytest.approx(1.0)
    assert lp_norm(np.full(4, 2.0), m, 2) == pytest.approx(2.0)
    vec = np.stack([np.full(4, 3.0), np.full(4, 4.0)])
    assert lp_norm(vec, m, 2) == pytest.approx(5.0)
    with pytest.raises(MeshMismatch):
        lp_norm(np.ones(5), m)
    with pytest.raises(ValueError):
        lp_norm(np.ones(4), m, 3)


def test_dump_round_trip(tmp_path, rng):
    m = StructMesh((3, 5), origin=(0.1, 0.2), extent=(1.5, 2.5))
    cf = CellField(m, rng.normal(size=(4, 3, 5)), time=0.123456789)
    path = tmp_path / "f.dat"
    write_dump(cf, path, 1.4)
    back, gamma = read_dump(path)
    assert gamma == 1.4 and back.time == cf.time and back.mesh == m
    np.testing.assert_array_equal(back.data, cf.data)
    assert path.read_text().splitlines()[0].startswith("2 3 5 ")


def test_dump_rejects_truncated_file(tmp_path):
    cf = CellField(StructMesh((4,)), np.ones((3, 4)))
    path = tmp_path / "f.dat"
    write_dump(cf, path, 1.4)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError):
        read_dump(path)


def test_restrict_of_projection_is_coarse_projection(rng):
    # a function piecewise constant on the fine cells
    levels = rng.uniform(1, 2, 16)

    def f(x):
        v = levels[np.minimum((x * 16).astype(int), 15)]
        return np.stack([v, 0 * v, v])

    fine, coarse = StructMesh((16,)), StructMesh((4,))
    np.testing.assert_allclose(restrict(project(f, fine), coarse).data, project(f, coarse).data, rtol=1e-14)
