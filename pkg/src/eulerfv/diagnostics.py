"""Relative energy, error norms and experimental orders of convergence."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .gas import ConsState, GasLaw, d_rho_e, entropy_from_rho_p, pressure, thermo_from_rho_eta, unpack
from .grid import CellField, MeshMismatch, NonNestedMesh, StructMesh, lp_norm, refinement_ratio, restrict_array


@dataclass(frozen=True)
class RefState:
    """Comparison trio: density, velocity and total entropy (scalars or per-cell arrays)."""

    rho_ref: np.ndarray | float
    vel_ref: np.ndarray
    eta_ref: np.ndarray | float

    def __post_init__(self):
        object.__setattr__(self, "vel_ref", np.atleast_1d(np.asarray(self.vel_ref, dtype=float)))
        if not np.all(np.asarray(self.rho_ref) > 0):
            raise ValueError("reference density must be positive")

    @property
    def mom_ref(self):
        return self.rho_ref * self.vel_ref

    @classmethod
    def from_cons(cls, U, gas: GasLaw) -> "RefState":
        rho, mom, _ = unpack(U)
        return cls(rho, mom / rho, entropy_from_rho_p(rho, pressure(U, gas), gas))


@dataclass
class RefField:
    mesh: StructMesh
    ref: RefState


def _as_array(u) -> np.ndarray:
    return u.to_array() if isinstance(u, ConsState) else np.asarray(u, dtype=float)


def relative_energy(u, ref: RefState, gas: GasLaw):
    """Relative energy of ``(rho, m, eta)`` with respect to ``ref``, pointwise."""
    U = _as_array(u)
    rho, mom, _ = unpack(U)
    p = pressure(U, gas)
    if not (np.all(rho > 0) and np.all(p > 0)):
        raise ValueError("relative energy needs an admissible state")
    eta = entropy_from_rho_p(rho, p, gas)
    dr, de = d_rho_e(ref.rho_ref, ref.eta_ref, gas)
    e_ref = thermo_from_rho_eta(ref.rho_ref, ref.eta_ref, gas).e
    rel_vel = mom / rho - ref.vel_ref
    return (0.5 * rho * np.sum(rel_vel * rel_vel, axis=0) + gas.c_v * p
            - dr * (rho - ref.rho_ref) - de * (eta - ref.eta_ref) - ref.rho_ref * e_ref)


def relative_energy_expanded(u, ref: RefState, gas: GasLaw):
    """Same functional, regrouped around the reference pressure."""
    U = _as_array(u)
    rho, mom, E = unpack(U)
    eta = entropy_from_rho_p(rho, pressure(U, gas), gas)
    tp = thermo_from_rho_eta(ref.rho_ref, ref.eta_ref, gas)
    th = tp.theta
    bracket = 0.5 * np.sum(ref.vel_ref**2, axis=0) - (1.0 + gas.c_v) * th + th * ref.eta_ref / ref.rho_ref
    return E + rho * bracket - np.sum(mom * ref.vel_ref, axis=0) - eta * th + tp.p


def prolong(values: np.ndarray, coarse: StructMesh, fine: StructMesh) -> np.ndarray:
    """Piecewise-constant injection of coarse cell values onto a nested fine mesh."""
    ratios = refinement_ratio(fine, coarse)
    out = np.asarray(values)
    lead = out.ndim - coarse.dim
    for a, r in enumerate(ratios):
        out = np.repeat(out, r, axis=lead + a)
    return out


def restrict_reference(ref: RefField, coarse: StructMesh) -> RefField:
    """Average reference density, momentum and entropy onto a coarser nested mesh."""
    r = ref.ref
    rho = restrict_array(np.asarray(r.rho_ref, dtype=float), ref.mesh, coarse)
    mom = restrict_array(np.asarray(r.mom_ref, dtype=float), ref.mesh, coarse)
    eta = restrict_array(np.asarray(r.eta_ref, dtype=float), ref.mesh, coarse)
    return RefField(coarse, RefState(rho, mom / rho, eta))


COMPARISONS = ("prolong", "restrict")


def _pair(cf: CellField, ref: RefField, comparison: str):
    """Bring a solution and its reference onto one mesh.

    ``prolong`` measures the coarse piecewise-constant solution against the
    reference on the reference mesh; ``restrict`` averages the reference onto
    the solution mesh first. Both coincide when the meshes are equal.
    """
    if comparison not in COMPARISONS:
        raise ValueError(f"comparison must be one of {COMPARISONS}")
    if cf.mesh == ref.mesh:
        return cf.data, ref.ref, cf.mesh
    try:
        if comparison == "prolong":
            return prolong(cf.data, cf.mesh, ref.mesh), ref.ref, ref.mesh
        return cf.data, restrict_reference(ref, cf.mesh).ref, cf.mesh
    except NonNestedMesh as exc:
        raise MeshMismatch(f"field on {cf.mesh.n} cannot be compared with reference on {ref.mesh.n}: {exc}") from exc


def relative_energy_norm(cf: CellField, ref: RefField, gas: GasLaw, comparison: str = "prolong") -> float:
    """``int E(U_h | ref) dx`` as a sum over the comparison mesh."""
    U, r, mesh = _pair(cf, ref, comparison)
    return lp_norm(relative_energy(U, r, gas), mesh, 1)


def error_norms(cf: CellField, ref: RefField, gas: GasLaw,
                comparison: str = "prolong") -> tuple[float, float, float]:
    """L2 errors of density, momentum (vector) and total entropy."""
    U, r, mesh = _pair(cf, ref, comparison)
    rho, mom, _ = unpack(U)
    eta = entropy_from_rho_p(rho, pressure(U, gas), gas)
    return (lp_norm(rho - r.rho_ref, mesh, 2),
            lp_norm(mom - r.mom_ref, mesh, 2),
            lp_norm(eta - r.eta_ref, mesh, 2))


def eoc(e_coarse: float, e_fine: float) -> float:
    if e_coarse <= 0 or e_fine <= 0:
        raise ValueError("orders need positive errors")
    return math.log2(e_coarse / e_fine)


def equivalence_probe(samples) -> tuple[float, float]:
    """Extremal ratios ``E / (|d rho|^2 + |d m|^2 + |d eta|^2)`` over ``(U, ref, gas)`` samples."""
    ratios = []
    for U, ref, gas in samples:
        U = _as_array(U)
        rho, mom, _ = unpack(U)
        eta = entropy_from_rho_p(rho, pressure(U, gas), gas)
        dist = ((rho - ref.rho_ref) ** 2 + np.sum((mom - ref.mom_ref) ** 2, axis=0)
                + (eta - ref.eta_ref) ** 2)
        re = relative_energy(U, ref, gas)
        keep = np.asarray(dist) > 0
        ratios.append(np.atleast_1d((re / np.where(keep, dist, 1.0))[keep]))
    if not ratios:
        raise ValueError("empty sample set")
    allr = np.concatenate(ratios)
    if allr.size == 0:
        raise ValueError("all samples coincide with their reference")
    return float(allr.min()), float(allr.max())


# references ---------------------------------------------------------------

def reference_from_samples(rho, mom, eta, mesh: StructMesh) -> RefField:
    """Cell-average sub-sampled reference data: last axis holds the samples."""
    rho_a, eta_a = rho.mean(axis=-1), eta.mean(axis=-1)
    mom_a = mom.mean(axis=-1)
    return RefField(mesh, RefState(rho_a, mom_a / rho_a, eta_a))


def reference_from_fine(fine: CellField, gas: GasLaw) -> RefField:
    """Use a fine numerical solution as the reference."""
    return RefField(fine.mesh, RefState.from_cons(fine.data, gas))


def exact_reference(left, right, jump_position: float, t: float, mesh: StructMesh,
                    gas: GasLaw, subsamples: int = 4) -> RefField:
    """Cell averages of the exact Riemann solution's density, momentum and entropy on ``mesh``."""
    from .riemann import sample_cells

    w = sample_cells(left, right, jump_position, t, mesh, gas, subsamples)
    rho = np.asarray(w.rho)
    return reference_from_samples(rho, rho[None] * w.vel, entropy_from_rho_p(rho, w.p, gas), mesh)


# reports ------------------------------------------------------------------

REPORT_COLUMNS = ["n", "e_rho", "ord_rho", "e_mom", "ord_mom", "e_eta", "ord_eta", "e_RE", "ord_RE"]
_QUANTITIES = ("rho", "mom", "eta", "RE")


@dataclass
class ErrorReport:
    n: list[int] = field(default_factory=list)
    errors: dict[str, list[float]] = field(default_factory=lambda: {q: [] for q in _QUANTITIES})
    meta: dict = field(default_factory=dict)

    def add(self, n: int, e_rho: float, e_mom: float, e_eta: float, e_re: float) -> None:
        if self.n and n != 2 * self.n[-1]:
            raise ValueError("mesh sizes must double between rows")
        self.n.append(int(n))
        for q, v in zip(_QUANTITIES, (e_rho, e_mom, e_eta, e_re)):
            if v < 0:
                raise ValueError(f"negative {q} error")
            self.errors[q].append(float(v))

    def orders(self, quantity: str) -> list[float | None]:
        e = self.errors[quantity]
        return [None] + [eoc(a, b) if a > 0 and b > 0 else None for a, b in zip(e, e[1:])]

    def rows(self):
        ords = {q: self.orders(q) for q in _QUANTITIES}
        for i, n in enumerate(self.n):
            row = [n]
            for q in _QUANTITIES:
                row += [self.errors[q][i], ords[q][i]]
            yield row

    def write_csv(self, path_or_file) -> None:
        def emit(fh):
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(REPORT_COLUMNS)
            for row in self.rows():
                w.writerow([row[0]] + ["" if v is None else f"{v:.17g}" for v in row[1:]])

        if hasattr(path_or_file, "write"):
            emit(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                emit(fh)

    def to_json(self) -> str:
        body = {"meta": self.meta, "columns": REPORT_COLUMNS,
                "rows": [dict(zip(REPORT_COLUMNS, r)) for r in self.rows()]}
        return json.dumps(body, indent=2, sort_keys=True)

    def format_table(self) -> str:
        """Human-readable table with four decimals, like the published tables."""
        lines = [" ".join(f"{c:>10}" for c in REPORT_COLUMNS)]
        for row in self.rows():
            cells = [f"{row[0]:>10d}"]
            for i, v in enumerate(row[1:]):
                if v is None:
                    cells.append(f"{'-':>10}")
                elif i % 2 == 0 and i == 6:
                    cells.append(f"{v:>10.6f}")
                else:
                    cells.append(f"{v:>10.4f}")
            lines.append(" ".join(cells))
        return "\n".join(lines)
