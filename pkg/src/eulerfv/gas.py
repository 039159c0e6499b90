"""Gamma-law gas thermodynamics.

Conservative states are stored as stacked arrays ``U = (rho, m_1, ..., m_d, E)``
along the leading axis; the dataclasses below are thin named views that accept
scalars or arrays in every field, so the same functions serve single states and
whole fields.

The gas constant is normalised to one, so the temperature is ``theta = p / rho``
and the specific internal energy is ``e = c_v * theta``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonPhysicalState(ValueError):
    """A state with non-positive density, pressure or internal energy."""


@dataclass(frozen=True)
class GasLaw:
    gamma: float = 1.4

    def __post_init__(self):
        if not (1.0 < self.gamma <= 2.0):
            raise ValueError(f"gamma must lie in (1, 2], got {self.gamma}")

    @property
    def c_v(self) -> float:
        return 1.0 / (self.gamma - 1.0)


@dataclass(frozen=True)
class PrimState:
    rho: np.ndarray | float
    vel: np.ndarray
    p: np.ndarray | float

    def __post_init__(self):
        object.__setattr__(self, "vel", np.atleast_1d(np.asarray(self.vel, dtype=float)))

    @property
    def dim(self) -> int:
        return self.vel.shape[0]


@dataclass(frozen=True)
class ConsState:
    rho: np.ndarray | float
    mom: np.ndarray
    e_total: np.ndarray | float

    def __post_init__(self):
        object.__setattr__(self, "mom", np.atleast_1d(np.asarray(self.mom, dtype=float)))

    @property
    def dim(self) -> int:
        return self.mom.shape[0]

    def to_array(self) -> np.ndarray:
        return pack(self.rho, self.mom, self.e_total)

    @classmethod
    def from_array(cls, U) -> "ConsState":
        rho, mom, E = unpack(U)
        return cls(rho, mom, E)


@dataclass(frozen=True)
class ThermoPoint:
    p: np.ndarray | float
    theta: np.ndarray | float
    e: np.ndarray | float
    s_specific: np.ndarray | float
    eta: np.ndarray | float


def pack(rho, mom, E) -> np.ndarray:
    """Stack density, momentum components and energy into one array."""
    rho = np.asarray(rho, dtype=float)
    E = np.asarray(E, dtype=float)
    mom = np.asarray(mom, dtype=float)
    return np.concatenate([rho[None], mom, E[None]])


def unpack(U):
    U = np.asarray(U, dtype=float)
    return U[0], U[1:-1], U[-1]


def _check_positive(name, value):
    value = np.asarray(value)
    if not np.all(value > 0):
        raise NonPhysicalState(f"{name} must be positive, got min {np.min(value)!r}")


def cons_from_prim(w: PrimState, gas: GasLaw) -> ConsState:
    _check_positive("density", w.rho)
    _check_positive("pressure", w.p)
    rho = np.asarray(w.rho, dtype=float)
    mom = rho * w.vel
    E = w.p / (gas.gamma - 1.0) + 0.5 * rho * np.sum(w.vel**2, axis=0)
    return ConsState(rho, mom, E)


def pressure(U, gas: GasLaw) -> np.ndarray:
    """Pressure of stacked conservative states, without admissibility checks."""
    rho, mom, E = unpack(U)
    return (gas.gamma - 1.0) * (E - 0.5 * np.sum(mom**2, axis=0) / rho)


def prim_from_cons(u: ConsState, gas: GasLaw) -> PrimState:
    _check_positive("density", u.rho)
    rho = np.asarray(u.rho, dtype=float)
    rho_e = u.e_total - 0.5 * np.sum(u.mom**2, axis=0) / rho
    if not np.all(rho_e > 0):
        raise NonPhysicalState(f"internal energy must be positive, got min {np.min(rho_e)!r}")
    return PrimState(rho, u.mom / rho, (gas.gamma - 1.0) * rho_e)


def entropy_eta(u: ConsState, gas: GasLaw):
    """Total entropy ``eta = c_v * rho * ln(p / rho**gamma)``."""
    w = prim_from_cons(u, gas)
    return entropy_from_rho_p(w.rho, w.p, gas)


def entropy_from_rho_p(rho, p, gas: GasLaw):
    return gas.c_v * rho * (np.log(p) - gas.gamma * np.log(rho))


def entropy_flux(u: ConsState, gas: GasLaw):
    """Entropy flux ``q = eta * u`` (one component per space direction)."""
    return entropy_eta(u, gas) * u.mom / u.rho


def thermo_from_rho_eta(rho, eta, gas: GasLaw) -> ThermoPoint:
    _check_positive("density", rho)
    rho = np.asarray(rho, dtype=float)
    s = eta / (gas.c_v * rho)
    p = rho**gas.gamma * np.exp(s)
    theta = p / rho
    return ThermoPoint(p=p, theta=theta, e=gas.c_v * theta, s_specific=s, eta=eta)


def d_rho_e(rho, eta, gas: GasLaw):
    """Gradient of the internal energy density ``rho*e`` in the ``(rho, eta)`` variables."""
    theta = thermo_from_rho_eta(rho, eta, gas).theta
    d_rho = (1.0 + gas.c_v) * theta - eta * theta / rho
    return d_rho, theta


def hessian_rho_e(rho, eta, gas: GasLaw) -> np.ndarray:
    """Hessian of ``rho*e`` in ``(rho, eta)``; shape ``(2, 2, ...)``."""
    theta = thermo_from_rho_eta(rho, eta, gas).theta
    scale = theta / (gas.c_v * rho)
    a = 1.0 - eta / rho
    return scale * np.array([[gas.c_v + a * a, a], [a, np.ones_like(a)]])


def sound_speed(w: PrimState, gas: GasLaw):
    _check_positive("density", w.rho)
    _check_positive("pressure", w.p)
    return np.sqrt(gas.gamma * w.p / w.rho)
