"""Uniform rectangular meshes, piecewise-constant cell fields and discrete norms."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NonNestedMesh(ValueError):
    pass


class MeshMismatch(ValueError):
    pass


@dataclass(frozen=True)
class StructMesh:
    n: tuple[int, ...]
    origin: tuple[float, ...] = None
    extent: tuple[float, ...] = None

    def __post_init__(self):
        n = tuple(int(k) for k in np.atleast_1d(self.n))
        if not 1 <= len(n) <= 3 or min(n) < 1:
            raise ValueError(f"invalid cell counts {self.n!r}")
        origin = (0.0,) * len(n) if self.origin is None else tuple(float(o) for o in self.origin)
        extent = (1.0,) * len(n) if self.extent is None else tuple(float(e) for e in self.extent)
        if len(origin) != len(n) or len(extent) != len(n) or min(extent) <= 0:
            raise ValueError("origin/extent must match the dimension and be positive")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "extent", extent)

    @classmethod
    def uniform(cls, n: int, dim: int = 1) -> "StructMesh":
        """``n`` cells per axis on the unit box."""
        return cls((n,) * dim)

    @property
    def dim(self) -> int:
        return len(self.n)

    @property
    def h(self) -> tuple[float, ...]:
        return tuple(e / k for e, k in zip(self.extent, self.n))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.h))

    def edges(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.h[axis] * np.arange(self.n[axis] + 1)

    def centers(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.h[axis] * (np.arange(self.n[axis]) + 0.5)

    def same_geometry(self, other: "StructMesh") -> bool:
        return self.origin == other.origin and self.extent == other.extent


@dataclass
class CellField:
    """Conservative cell averages, ``data[var, i0, i1, ...]`` with ``var`` over (rho, m..., E)."""

    mesh: StructMesh
    data: np.ndarray
    time: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        expected = (self.mesh.dim + 2,) + self.mesh.n
        if self.data.shape != expected:
            raise ValueError(f"field shape {self.data.shape} does not match mesh {expected}")

    @property
    def rho(self):
        return self.data[0]

    @property
    def mom(self):
        return self.data[1:-1]

    @property
    def energy(self):
        return self.data[-1]

    def totals(self) -> np.ndarray:
        """Integral of every conservative component over the domain."""
        return self.data.reshape(self.data.shape[0], -1).sum(axis=1) * self.mesh.cell_volume

    def copy(self) -> "CellField":
        return CellField(self.mesh, self.data.copy(), self.time, dict(self.meta))


def _subsample_points(mesh: StructMesh, subsamples: int):
    axes = []
    for a in range(mesh.dim):
        h = mesh.h[a]
        local = (np.arange(subsamples) + 0.5) / subsamples * h
        axes.append((mesh.edges(a)[:-1, None] + local[None, :]).ravel())
    return np.meshgrid(*axes, indexing="ij")


def _average_subsamples(values: np.ndarray, mesh: StructMesh, subsamples: int) -> np.ndarray:
    lead = values.shape[: values.ndim - mesh.dim]
    shape = lead
    for k in mesh.n:
        shape = shape + (k, subsamples)
    v = values.reshape(shape)
    axes = tuple(len(lead) + 2 * a + 1 for a in range(mesh.dim))
    return v.mean(axis=axes)


def project(f, mesh: StructMesh, subsamples: int = 4) -> CellField:
    """Cell averages of ``f`` by composite midpoint quadrature.

    ``f`` receives coordinate arrays ``(x, [y, [z]])`` and returns stacked
    conservative states of shape ``(dim + 2,) + x.shape``.
    """
    pts = _subsample_points(mesh, subsamples)
    values = np.asarray(f(*pts), dtype=float)
    return CellField(mesh, _average_subsamples(values, mesh, subsamples))


def project_scalar(f, mesh: StructMesh, subsamples: int = 4) -> np.ndarray:
    pts = _subsample_points(mesh, subsamples)
    return _average_subsamples(np.asarray(f(*pts), dtype=float), mesh, subsamples)


def refinement_ratio(fine: StructMesh, coarse: StructMesh) -> tuple[int, ...]:
    if fine.dim != coarse.dim or not fine.same_geometry(coarse):
        raise NonNestedMesh("meshes cover different domains")
    ratios = []
    for nf, nc in zip(fine.n, coarse.n):
        if nf % nc:
            raise NonNestedMesh(f"{nf} cells are not an integer refinement of {nc}")
        ratios.append(nf // nc)
    return tuple(ratios)


def restrict_array(values: np.ndarray, fine: StructMesh, coarse: StructMesh) -> np.ndarray:
    """Average trailing mesh axes of ``values`` from ``fine`` onto ``coarse``."""
    ratios = refinement_ratio(fine, coarse)
    lead = values.shape[: values.ndim - fine.dim]
    shape = lead
    for nc, r in zip(coarse.n, ratios):
        shape = shape + (nc, r)
    axes = tuple(len(lead) + 2 * a + 1 for a in range(fine.dim))
    return values.reshape(shape).mean(axis=axes)


def restrict(fine: CellField, coarse_mesh: StructMesh) -> CellField:
    """Measure-weighted average of fine children onto a nested coarse mesh."""
    data = restrict_array(fine.data, fine.mesh, coarse_mesh)
    return CellField(coarse_mesh, data, fine.time, dict(fine.meta))


def lp_norm(values, mesh: StructMesh, p: int = 2) -> float:
    """Discrete ``L^p`` norm of a per-cell scalar or vector quantity.

    Vector data carries its components on the leading axis and is measured with
    the Euclidean length per cell.
    """
    v = np.abs(np.asarray(values, dtype=float))
    if v.ndim == mesh.dim + 1:
        v = np.sqrt(np.sum(v * v, axis=0))
    if v.shape != mesh.n:
        raise MeshMismatch(f"values of shape {v.shape} do not live on mesh {mesh.n}")
    if p == 1:
        return float(mesh.cell_volume * v.sum())
    if p == 2:
        return float(np.sqrt(mesh.cell_volume * np.sum(v * v)))
    raise ValueError("only p = 1 and p = 2 are supported")


# field dump format ---------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_dump(cf: CellField, path, gamma: float) -> None:
    m = cf.mesh
    header = [str(m.dim), *map(str, m.n), *map(_fmt, m.origin), *map(_fmt, m.extent),
              _fmt(gamma), _fmt(cf.time)]
    rows = cf.data.reshape(cf.data.shape[0], -1).T
    with open(path, "w") as fh:
        fh.write(" ".join(header) + "\n")
        for r in rows:
            fh.write(" ".join(_fmt(v) for v in r) + "\n")


def read_dump(path) -> tuple[CellField, float]:
    """Return the stored field and the gamma it was computed with."""
    with open(path) as fh:
        head = fh.readline().split()
        dim = int(head[0])
        n = tuple(int(k) for k in head[1:1 + dim])
        rest = [float(v) for v in head[1 + dim:]]
        if len(rest) != 2 * dim + 2:
            raise ValueError(f"malformed dump header in {path}")
        origin, extent = tuple(rest[:dim]), tuple(rest[dim:2 * dim])
        gamma, time = rest[2 * dim], rest[2 * dim + 1]
        rows = np.loadtxt(fh, ndmin=2)
    mesh = StructMesh(n, origin, extent)
    if rows.shape != (int(np.prod(n)), dim + 2):
        raise ValueError(f"dump {path} has {rows.shape} records, expected {(int(np.prod(n)), dim + 2)}")
    data = rows.T.reshape((dim + 2,) + n)
    return CellField(mesh, data, time), gamma
