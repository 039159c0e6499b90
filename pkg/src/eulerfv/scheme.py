"""First-order finite-volume update with Godunov or VFV face fluxes.

The update is unsplit forward Euler: every face flux is evaluated from the
same time level and each cell gathers the fluxes through its own faces,

    U_K <- U_K - dt / |K| * sum_faces |sigma| F(U_L, U_R) . n_out.
"""
from __future__ import annotations

import csv
import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from . import riemann
from .gas import GasLaw, PrimState, pressure, unpack
from .grid import CellField

log = logging.getLogger(__name__)


class MonitorViolation(RuntimeError):
    """Density or pressure dropped below the alarm floor."""

    def __init__(self, message, time=None, cell=None):
        super().__init__(message)
        self.time = time
        self.cell = cell


class BoundaryKind(enum.Enum):
    REFLECTIVE = "reflective"
    TRANSMISSIVE = "transmissive"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class Scheme:
    kind: str = "godunov"
    epsilon: float = 1.0
    mu_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("godunov", "vfv"):
            raise ValueError(f"unknown scheme {self.kind!r}")
        if self.kind == "vfv" and self.epsilon <= 0:
            raise ValueError("VFV needs epsilon > 0")

    @property
    def label(self) -> str:
        if self.kind == "vfv":
            # flux is a stand-in, see vfv_flux
            return f"vfv-standin(eps={self.epsilon:g},mu={self.mu_scale:g})"
        return "godunov"


def uniform_boundaries(kind: BoundaryKind | str, dim: int):
    kind = BoundaryKind(kind)
    return tuple((kind, kind) for _ in range(dim))


def _check_boundaries(bc, dim):
    if len(bc) != dim:
        raise ValueError(f"need boundary pairs for {dim} axes, got {len(bc)}")
    out = []
    for lo, hi in bc:
        lo, hi = BoundaryKind(lo), BoundaryKind(hi)
        if (lo is BoundaryKind.PERIODIC) != (hi is BoundaryKind.PERIODIC):
            raise ValueError("periodic boundaries must be paired with periodic")
        out.append((lo, hi))
    return tuple(out)


@dataclass
class StepStats:
    time: float
    dt: float
    smax: float
    rho_min: float
    p_min: float
    E_max: float
    jump_l1: float
    jump_l2h: float
    totals: np.ndarray

    def row(self) -> list[float]:
        return [self.time, self.dt, self.smax, self.rho_min, self.p_min, self.E_max,
                self.jump_l1, self.jump_l2h, *self.totals]


@dataclass
class RunConfig:
    t_final: float
    scheme: Scheme = field(default_factory=Scheme)
    boundaries: tuple | str = "transmissive"
    cfl: float = 0.9
    gamma: float = 1.4
    rho_min_alarm: float = 1e-10
    p_min_alarm: float = 1e-10
    stats_every: int = 0
    dt_rule: str = "sum"
    riemann_options: riemann.SolverOptions = field(default_factory=riemann.SolverOptions)

    def __post_init__(self):
        if not 0 < self.cfl < 1:
            raise ValueError(f"cfl must lie in (0, 1), got {self.cfl}")
        if self.t_final < 0:
            raise ValueError("t_final must be nonnegative")

    @property
    def gas(self) -> GasLaw:
        return GasLaw(self.gamma)


# fluxes -------------------------------------------------------------------

def physical_flux(U, axis: int, gas: GasLaw) -> np.ndarray:
    """Euler flux ``F(U) . e_axis``."""
    U = np.asarray(U, dtype=float)
    rho, mom, E = unpack(U)
    p = pressure(U, gas)
    un = mom[axis] / rho
    F = np.empty_like(U)
    F[0] = mom[axis]
    F[1:-1] = mom * un
    F[1 + axis] += p
    F[-1] = un * (E + p)
    return F


def godunov_flux(UL, UR, axis: int, gas: GasLaw,
                 options: riemann.SolverOptions = riemann.SolverOptions()) -> np.ndarray:
    """Physical flux of the exact Riemann solution sampled at the face."""
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    rl, ml, _ = unpack(UL)
    rr, mr, _ = unpack(UR)
    pl, pr = pressure(UL, gas), pressure(UR, gas)
    vl, vr = ml / rl, mr / rr
    left = PrimState(rl, vl[axis][None], pl)
    right = PrimState(rr, vr[axis][None], pr)
    fan = riemann.solve_star(left, right, gas, options)
    face = riemann.sample(fan, left, right, 0.0, gas)
    rho, un, p = face.rho, face.vel[0], face.p
    # tangential velocity is carried by the contact
    vel = np.where(fan.u_star >= 0.0, vl, vr)
    vel[axis] = un
    F = np.empty(np.broadcast_shapes(UL.shape, UR.shape))
    F[0] = rho * un
    F[1:-1] = rho * un * vel
    F[1 + axis] += p
    E = p / (gas.gamma - 1.0) + 0.5 * rho * np.sum(vel * vel, axis=0)
    F[-1] = un * (E + p)
    same = np.all(UL == UR, axis=0)
    if np.any(same):
        F = np.where(same, physical_flux(UL, axis, gas), F)
    return F


def max_wave_speed(U, axis: int, gas: GasLaw) -> np.ndarray:
    rho, mom, _ = unpack(U)
    c = np.sqrt(gas.gamma * pressure(U, gas) / rho)
    return np.abs(mom[axis] / rho) + c


def vfv_flux(UL, UR, axis: int, gas: GasLaw, h: float, epsilon: float = 1.0,
             mu_scale: float = 1.0) -> np.ndarray:
    """Central flux with local wave-speed dissipation plus an ``h**epsilon`` viscosity.

    Stand-in for the viscosity finite-volume flux; it is not claimed to
    reproduce any published VFV numbers.
    """
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    lam = mu_scale * np.maximum(max_wave_speed(UL, axis, gas), max_wave_speed(UR, axis, gas))
    lam = lam + h**epsilon
    return 0.5 * (physical_flux(UL, axis, gas) + physical_flux(UR, axis, gas)) - 0.5 * lam * (UR - UL)


# boundaries ---------------------------------------------------------------

def ghost_state(inner, boundary: BoundaryKind | str, axis: int, opposite=None) -> np.ndarray:
    """Ghost-cell state across a boundary face normal to ``axis``.

    ``opposite`` is the cell on the far side of the domain, used by periodic
    boundaries.
    """
    boundary = BoundaryKind(boundary)
    inner = np.array(inner, dtype=float)
    if boundary is BoundaryKind.TRANSMISSIVE:
        return inner
    if boundary is BoundaryKind.REFLECTIVE:
        inner[1 + axis] = -inner[1 + axis]
        return inner
    if opposite is None:
        raise ValueError("periodic ghost needs the opposite cell")
    return np.array(opposite, dtype=float)


def _pad(U: np.ndarray, axis: int, bc) -> np.ndarray:
    ax = axis + 1
    first = np.take(U, [0], axis=ax)
    last = np.take(U, [-1], axis=ax)
    lo_kind, hi_kind = bc[axis]
    lo = ghost_state(first, lo_kind, axis, opposite=last)
    hi = ghost_state(last, hi_kind, axis, opposite=first)
    return np.concatenate([lo, U, hi], axis=ax)


# time stepping ------------------------------------------------------------

def _admissibility(U, gas, time, rho_floor, p_floor):
    rho = U[0]
    p = pressure(U, gas)
    bad = ~((rho > rho_floor) & (p > p_floor))
    if np.any(bad):
        cell = tuple(int(i) for i in np.argwhere(bad)[0])
        raise MonitorViolation(
            f"admissibility monitor tripped at t={time!r}, cell {cell}: "
            f"rho={float(rho[cell]):.6g}, p={float(p[cell]):.6g}", time=time, cell=cell)
    return p


DT_RULES = ("sum", "axis-min")


def compute_dt(cf: CellField, cfl: float, gas: GasLaw, t_remaining: float | None = None,
               rule: str = "sum") -> float:
    """CFL time step, clipped to land on the final time.

    ``sum``: ``cfl / max_K sum_i (|u_i| + c) / h_i``, the bound under which the
    unsplit update is a convex combination of one-dimensional updates.
    ``axis-min``: ``cfl * min_i min_K h_i / (|u_i| + c)``. Both agree in 1D.
    """
    _admissibility(cf.data, gas, cf.time, 0.0, 0.0)
    if rule == "sum":
        rate = sum(max_wave_speed(cf.data, axis, gas) / h for axis, h in enumerate(cf.mesh.h))
        dt = cfl / float(np.max(rate))
    elif rule == "axis-min":
        dt = min(h / float(np.max(max_wave_speed(cf.data, axis, gas))) for axis, h in enumerate(cf.mesh.h))
        dt *= cfl
    else:
        raise ValueError(f"dt rule must be one of {DT_RULES}")
    if t_remaining is not None:
        dt = min(dt, t_remaining)
    return dt


def jump_sums(cf: CellField) -> tuple[float, float]:
    """Interior-face sums of ``|sigma| |[[U]]|`` and ``|sigma| |[[U]]|^2 / h``."""
    l1 = l2h = 0.0
    for axis, h in enumerate(cf.mesh.h):
        d = np.diff(cf.data, axis=axis + 1)
        mag2 = np.sum(d * d, axis=0)
        face = cf.mesh.cell_volume / h
        l1 += face * float(np.sum(np.sqrt(mag2)))
        l2h += face * float(np.sum(mag2)) / h
    return l1, l2h


def field_stats(cf: CellField, gas: GasLaw, dt: float = 0.0, smax: float = 0.0) -> StepStats:
    p = pressure(cf.data, gas)
    l1, l2h = jump_sums(cf)
    return StepStats(time=cf.time, dt=dt, smax=smax, rho_min=float(cf.rho.min()),
                     p_min=float(p.min()), E_max=float(cf.energy.max()),
                     jump_l1=l1, jump_l2h=l2h, totals=cf.totals())


def step(cf: CellField, scheme: Scheme, bc, dt: float, gas: GasLaw,
         rho_min_alarm: float = 1e-10, p_min_alarm: float = 1e-10,
         options: riemann.SolverOptions = riemann.SolverOptions()):
    """Advance one forward-Euler step; returns the new field and its stats."""
    bc = _check_boundaries(bc, cf.mesh.dim)
    U = cf.data
    dU = np.zeros_like(U)
    smax = 0.0
    for axis, h in enumerate(cf.mesh.h):
        P = _pad(U, axis, bc)
        ax = axis + 1
        lo = [slice(None)] * P.ndim
        hi = [slice(None)] * P.ndim
        lo[ax], hi[ax] = slice(None, -1), slice(1, None)
        UL, UR = P[tuple(lo)], P[tuple(hi)]
        if scheme.kind == "godunov":
            try:
                F = godunov_flux(UL, UR, axis, gas, options)
            except riemann.VacuumFormation as exc:
                raise riemann.VacuumFormation(f"at t={cf.time!r}, axis {axis}: {exc}") from exc
        else:
            F = vfv_flux(UL, UR, axis, gas, h, scheme.epsilon, scheme.mu_scale)
        smax = max(smax, float(np.max(max_wave_speed(U, axis, gas))))
        dU -= (dt / h) * np.diff(F, axis=ax)
    new = CellField(cf.mesh, U + dU, cf.time + dt, dict(cf.meta))
    _admissibility(new.data, gas, new.time, rho_min_alarm, p_min_alarm)
    return new, field_stats(new, gas, dt, smax)


def run(config: RunConfig, initial: CellField):
    """Advance ``initial`` to ``config.t_final``; returns the final field and stats rows.

    The stats list always holds the initial and the final state; with
    ``stats_every = k > 0`` every k-th step is recorded as well.
    """
    gas = config.gas
    bc = config.boundaries
    if isinstance(bc, (str, BoundaryKind)):
        bc = uniform_boundaries(bc, initial.mesh.dim)
    bc = _check_boundaries(bc, initial.mesh.dim)

    cf = initial.copy()
    _admissibility(cf.data, gas, cf.time, config.rho_min_alarm, config.p_min_alarm)
    history = [field_stats(cf, gas)]
    t_end = cf.time + config.t_final
    nsteps = 0
    last = history[0]
    while cf.time < t_end:
        dt = compute_dt(cf, config.cfl, gas, t_end - cf.time, config.dt_rule)
        cf, last = step(cf, config.scheme, bc, dt, gas, config.rho_min_alarm,
                        config.p_min_alarm, config.riemann_options)
        nsteps += 1
        if t_end - cf.time <= 1e-14 * max(1.0, t_end):
            cf.time = last.time = t_end
        if config.stats_every and nsteps % config.stats_every == 0:
            history.append(last)
    if history[-1] is not last:
        history.append(last)
    log.debug("run finished after %d steps at t=%g", nsteps, cf.time)
    return cf, history


STATS_COLUMNS_1D = ["t", "dt", "smax", "rho_min", "p_min", "E_max", "jump_l1", "jump_l2h",
                    "mass", "momx", "energy"]


def stats_columns(dim: int) -> list[str]:
    moms = ["momx", "momy", "momz"][:dim]
    return STATS_COLUMNS_1D[:9] + moms + ["energy"]


def write_stats(history, dim: int, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(stats_columns(dim))
        for s in history:
            w.writerow([f"{v:.17g}" for v in s.row()])
