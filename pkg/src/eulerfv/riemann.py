"""Exact Riemann solver for the one-dimensional gamma-law Euler equations.

All routines are vectorised: the left/right states may carry arrays of equal
shape and one call solves every problem at once, which is how the Godunov flux
uses them (one Riemann problem per face).

Only the normal velocity takes part; ``PrimState.vel[0]`` is used.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gas import GasLaw, PrimState, cons_from_prim

P_FLOOR = 1e-14


class VacuumFormation(RuntimeError):
    """The two states would generate vacuum (pressure positivity fails)."""


class NoConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-12
    max_iter: int = 100


@dataclass(frozen=True)
class RiemannFan:
    p_star: np.ndarray | float
    u_star: np.ndarray | float
    left_shock: np.ndarray | bool
    right_shock: np.ndarray | bool
    rho_star_left: np.ndarray | float
    rho_star_right: np.ndarray | float

    @property
    def left_wave(self):
        return _wave_name(self.left_shock)

    @property
    def right_wave(self):
        return _wave_name(self.right_shock)


def _wave_name(shock):
    names = np.where(shock, "shock", "rarefaction")
    return str(names) if names.ndim == 0 else names


@dataclass(frozen=True)
class WaveSpan:
    """Head/tail speeds of the left and right waves; a shock has head == tail."""

    left_head: np.ndarray | float
    left_tail: np.ndarray | float
    contact: np.ndarray | float
    right_tail: np.ndarray | float
    right_head: np.ndarray | float


def _unpack(w: PrimState, gas: GasLaw):
    rho = np.asarray(w.rho, dtype=float)
    u = np.asarray(w.vel[0], dtype=float)
    p = np.asarray(w.p, dtype=float)
    if not (np.all(rho > 0) and np.all(p > 0)):
        raise ValueError("Riemann states must have positive density and pressure")
    return rho, u, p, np.sqrt(gas.gamma * p / rho)


def _branch(p, rho_k, p_k, c_k, g):
    """Value and derivative of the one-sided pressure function."""
    a = 2.0 / ((g + 1.0) * rho_k)
    b = (g - 1.0) / (g + 1.0) * p_k
    shock = p > p_k
    root = np.sqrt(a / (np.where(shock, p, p_k) + b))
    f_shock = (p - p_k) * root
    df_shock = root * (1.0 - 0.5 * (p - p_k) / (p + b))
    ratio = p / p_k
    z = (g - 1.0) / (2.0 * g)
    f_rare = 2.0 * c_k / (g - 1.0) * (ratio**z - 1.0)
    df_rare = ratio ** (-(g + 1.0) / (2.0 * g)) / (rho_k * c_k)
    return np.where(shock, f_shock, f_rare), np.where(shock, df_shock, df_rare)


def pressure_function(p, left: PrimState, right: PrimState, gas: GasLaw):
    """``f_L(p) + f_R(p) + (u_R - u_L)``; its root is the star pressure."""
    rl, ul, pl, cl = _unpack(left, gas)
    rr, ur, pr, cr = _unpack(right, gas)
    fl, _ = _branch(p, rl, pl, cl, gas.gamma)
    fr, _ = _branch(p, rr, pr, cr, gas.gamma)
    return fl + fr + (ur - ul)


def solve_star(left: PrimState, right: PrimState, gas: GasLaw,
               options: SolverOptions = SolverOptions()) -> RiemannFan:
    g = gas.gamma
    rl, ul, pl, cl = _unpack(left, gas)
    rr, ur, pr, cr = _unpack(right, gas)
    rl, ul, pl, cl, rr, ur, pr, cr = np.broadcast_arrays(rl, ul, pl, cl, rr, ur, pr, cr)
    du = ur - ul

    vacuum = 2.0 * (cl + cr) / (g - 1.0) <= du
    if np.any(vacuum):
        i = np.flatnonzero(vacuum.ravel())[0]
        raise VacuumFormation(f"vacuum generated by state pair at index {i}")

    def residual(p):
        fl, dfl = _branch(p, rl, pl, cl, g)
        fr, dfr = _branch(p, rr, pr, cr, g)
        return fl + fr + du, dfl + dfr

    # two-rarefaction estimate is exact when both waves are rarefactions
    z = (g - 1.0) / (2.0 * g)
    p = ((cl + cr - 0.5 * (g - 1.0) * du) / (cl / pl**z + cr / pr**z)) ** (1.0 / z)
    p = np.maximum(p, P_FLOOR)
    done = np.zeros(p.shape, dtype=bool)
    for _ in range(options.max_iter):
        f, df = residual(p)
        p_new = np.maximum(p - f / df, P_FLOOR)
        done = np.abs(p_new - p) <= options.tol * 0.5 * (p_new + p)
        p = p_new
        if np.all(done):
            break
    if not np.all(done):
        p = np.where(done, p, _bisect(residual, p.shape, pl, pr, options))
    # one polishing step brings the residual to round-off
    f, df = residual(p)
    p = np.maximum(p - f / df, P_FLOOR)

    fl, _ = _branch(p, rl, pl, cl, g)
    fr, _ = _branch(p, rr, pr, cr, g)
    u = 0.5 * (ul + ur) + 0.5 * (fr - fl)

    g6 = (g - 1.0) / (g + 1.0)
    left_shock = p > pl
    right_shock = p > pr
    qa = p / pl
    qb = p / pr
    rho_sl = np.where(left_shock, rl * (qa + g6) / (g6 * qa + 1.0), rl * qa ** (1.0 / g))
    rho_sr = np.where(right_shock, rr * (qb + g6) / (g6 * qb + 1.0), rr * qb ** (1.0 / g))

    same = (rl == rr) & (ul == ur) & (pl == pr)
    if np.any(same):
        p = np.where(same, pl, p)
        u = np.where(same, ul, u)
        rho_sl = np.where(same, rl, rho_sl)
        rho_sr = np.where(same, rr, rho_sr)
        left_shock = left_shock & ~same
        right_shock = right_shock & ~same
    return RiemannFan(p, u, left_shock, right_shock, rho_sl, rho_sr)


def _bisect(residual, shape, pl, pr, options):
    lo = np.full(shape, P_FLOOR)
    hi = np.maximum(pl, pr).astype(float).copy()
    for _ in range(2000):
        f, _ = residual(hi)
        low = f < 0
        if not np.any(low):
            break
        hi = np.where(low, 2.0 * hi, hi)
    else:
        raise NoConvergence("could not bracket the star pressure")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        f, _ = residual(mid)
        lo = np.where(f < 0, mid, lo)
        hi = np.where(f < 0, hi, mid)
        if np.all(hi - lo <= options.tol * hi):
            return 0.5 * (lo + hi)
    raise NoConvergence("bisection fallback exhausted its budget")


def wave_speeds(fan: RiemannFan, left: PrimState, right: PrimState, gas: GasLaw) -> WaveSpan:
    g = gas.gamma
    rl, ul, pl, cl = _unpack(left, gas)
    rr, ur, pr, cr = _unpack(right, gas)
    p, u = fan.p_star, fan.u_star
    s_left = ul - cl * np.sqrt((g + 1.0) / (2.0 * g) * p / pl + (g - 1.0) / (2.0 * g))
    s_right = ur + cr * np.sqrt((g + 1.0) / (2.0 * g) * p / pr + (g - 1.0) / (2.0 * g))
    z = (g - 1.0) / (2.0 * g)
    c_sl = cl * (p / pl) ** z
    c_sr = cr * (p / pr) ** z
    return WaveSpan(
        left_head=np.where(fan.left_shock, s_left, ul - cl),
        left_tail=np.where(fan.left_shock, s_left, u - c_sl),
        contact=u,
        right_tail=np.where(fan.right_shock, s_right, u + c_sr),
        right_head=np.where(fan.right_shock, s_right, ur + cr),
    )


def sample(fan: RiemannFan, left: PrimState, right: PrimState, xi, gas: GasLaw) -> PrimState:
    """Evaluate the self-similar solution at ``xi = x / t``.

    A ``xi`` exactly on a shock returns the upstream state and one exactly on
    the contact returns the left star state.
    """
    g = gas.gamma
    rl, ul, pl, cl = _unpack(left, gas)
    rr, ur, pr, cr = _unpack(right, gas)
    xi = np.asarray(xi, dtype=float)
    span = wave_speeds(fan, left, right, gas)
    p_s, u_s = fan.p_star, fan.u_star

    a = 2.0 / (g + 1.0)
    b = (g - 1.0) / ((g + 1.0))
    # rarefaction interiors, clipped so unused branches stay finite
    base_l = np.maximum(a + b / cl * (ul - xi), 0.0)
    base_r = np.maximum(a - b / cr * (ur - xi), 0.0)
    fan_l = (rl * base_l ** (2.0 / (g - 1.0)), a * (cl + 0.5 * (g - 1.0) * ul + xi),
             pl * base_l ** (2.0 * g / (g - 1.0)))
    fan_r = (rr * base_r ** (2.0 / (g - 1.0)), a * (-cr + 0.5 * (g - 1.0) * ur + xi),
             pr * base_r ** (2.0 * g / (g - 1.0)))

    on_left = xi <= u_s
    outer_l = xi <= span.left_head
    star_l = np.where(fan.left_shock, ~outer_l, xi >= span.left_tail)
    outer_r = xi >= span.right_head
    star_r = np.where(fan.right_shock, ~outer_r, xi <= span.right_tail)

    def pick(outer_left, star_left, fan_left, outer_right, star_right, fan_right):
        left_val = np.where(outer_l, outer_left, np.where(star_l, star_left, fan_left))
        right_val = np.where(outer_r, outer_right, np.where(star_r, star_right, fan_right))
        return np.where(on_left, left_val, right_val)

    rho = pick(rl, fan.rho_star_left, fan_l[0], rr, fan.rho_star_right, fan_r[0])
    u = pick(ul, u_s, fan_l[1], ur, u_s, fan_r[1])
    p = pick(pl, p_s, fan_l[2], pr, p_s, fan_r[2])
    return PrimState(rho, u[None], p)


def interface_state(left: PrimState, right: PrimState, gas: GasLaw,
                    options: SolverOptions = SolverOptions()) -> PrimState:
    fan = solve_star(left, right, gas, options)
    return sample(fan, left, right, 0.0, gas)


def sample_cells(left: PrimState, right: PrimState, jump_position: float, t: float,
                 mesh, gas: GasLaw, subsamples: int = 32) -> PrimState:
    """Exact solution at ``subsamples`` midpoints of every cell of a 1D mesh.

    Returned arrays have shape ``(n, subsamples)``.
    """
    if mesh.dim != 1:
        raise ValueError("exact Riemann profiles need a 1D mesh")
    if t <= 0:
        raise ValueError("exact profile requires t > 0")
    h = mesh.h[0]
    offsets = (np.arange(subsamples) + 0.5) / subsamples * h
    x = mesh.origin[0] + np.arange(mesh.n[0])[:, None] * h + offsets[None, :]
    fan = solve_star(left, right, gas)
    return sample(fan, left, right, (x - jump_position) / t, gas)


def exact_profile(left: PrimState, right: PrimState, jump_position: float, t: float,
                  mesh, gas: GasLaw = GasLaw(), subsamples: int = 32):
    """Cell averages of the exact solution, by composite midpoint quadrature."""
    from .grid import CellField

    if subsamples < 16:
        raise ValueError("use at least 16 sub-samples per cell")
    w = sample_cells(left, right, jump_position, t, mesh, gas, subsamples)
    U = cons_from_prim(w, gas).to_array()
    return CellField(mesh, U.mean(axis=-1))
