"""Catalog of the Riemann-problem test cases and a YAML scenario reader.

Scenario document schema::

    name: my-case
    dim: 2
    domain: {origin: [0, 0], extent: [1, 1]}     # optional, unit box
    t_final: 0.2
    gamma: 1.4                                     # optional
    boundary: transmissive                         # optional
    reference: exact | fine:256                    # optional
    regions:
      - {where: "x > 0.5, y > 0.5", rho: 1.0, u: 0.0, v: 0.0, p: 1.0}
      - ...

``where`` is a comma-separated list of axis conditions ``x < a`` / ``y > b``;
each region is the box cut out of the domain by its conditions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
import yaml

from .gas import GasLaw, PrimState, cons_from_prim
from .grid import CellField, StructMesh

AXES = "xyz"
VEL_KEYS = ("u", "v", "w")


class UnknownScenario(KeyError):
    pass


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Region:
    where: str
    rho: float
    vel: tuple[float, ...]
    p: float

    def bounds(self, dim: int, origin, extent):
        lo = list(origin)
        hi = [o + e for o, e in zip(origin, extent)]
        for cond in _parse_where(self.where):
            axis, op, value = cond
            if axis >= dim:
                raise ScenarioError(f"condition {self.where!r} names an axis beyond dim={dim}")
            if op == "<":
                hi[axis] = min(hi[axis], value)
            else:
                lo[axis] = max(lo[axis], value)
        return lo, hi

    @property
    def state(self) -> PrimState:
        return PrimState(self.rho, np.array(self.vel), self.p)


_COND = re.compile(r"^\s*([xyz])\s*([<>])=?\s*([-+0-9.eE]+)\s*$")


def _parse_where(text: str):
    if text.strip() in ("", "all"):
        return []
    out = []
    for part in text.split(","):
        m = _COND.match(part)
        if not m:
            raise ScenarioError(f"cannot parse region condition {part.strip()!r}")
        out.append((AXES.index(m.group(1)), m.group(2), float(m.group(3))))
    return out


@dataclass(frozen=True)
class Scenario:
    name: str
    dim: int
    t_final: float
    regions: tuple[Region, ...]
    origin: tuple[float, ...] = None
    extent: tuple[float, ...] = None
    gamma: float = 1.4
    boundary: str = "transmissive"
    reference: str = "exact"
    description: str = field(default="", compare=False)

    def __post_init__(self):
        if self.origin is None:
            object.__setattr__(self, "origin", (0.0,) * self.dim)
        if self.extent is None:
            object.__setattr__(self, "extent", (1.0,) * self.dim)

    @property
    def gas(self) -> GasLaw:
        return GasLaw(self.gamma)

    def mesh(self, n: int) -> StructMesh:
        return StructMesh((n,) * self.dim, self.origin, self.extent)

    def riemann_data(self):
        """``(left, right, x0)`` for a 1D two-state problem."""
        if self.dim != 1 or len(self.regions) != 2:
            raise ScenarioError(f"{self.name} is not a single 1D Riemann problem")
        boxes = [r.bounds(1, self.origin, self.extent) for r in self.regions]
        order = sorted(range(2), key=lambda i: boxes[i][0][0])
        left, right = (self.regions[i] for i in order)
        x0 = boxes[order[0]][1][0]
        if x0 != boxes[order[1]][0][0]:
            raise ScenarioError("regions do not meet at a single interface")
        return left.state, right.state, x0


def _q(where, rho, u, v, p):
    return Region(where, rho, (u, v), p)


def _h(where, rho, u, p):
    return Region(where, rho, (u,), p)


_BUILTINS = {
    "single-c": Scenario("single-c", 1, 0.2, (_h("x < 0.5", 0.5, 0.5, 5.0), _h("x > 0.5", 1.0, 0.5, 5.0)),
                         description="single contact wave"),
    "single-r": Scenario("single-r", 1, 0.2, (_h("x < 0.5", 0.5197, -0.7259, 0.4), _h("x > 0.5", 1.0, 0.0, 1.0)),
                         description="single rarefaction wave"),
    "single-s": Scenario("single-s", 1, 0.25, (_h("x < 0.5", 1.0, 0.7276, 1.0), _h("x > 0.5", 0.5313, 0.0, 0.4)),
                         description="single shock wave"),
    "double-r": Scenario("double-r", 1, 0.15, (_h("x < 0.5", 1.0, -2.0, 0.4), _h("x > 0.5", 1.0, 2.0, 0.4)),
                         description="left- and right-going rarefactions"),
    "sod": Scenario("sod", 1, 0.15, (_h("x < 0.5", 1.0, 0.0, 1.0), _h("x > 0.5", 0.125, 0.0, 0.1)),
                    description="Sod shock tube"),
    "2d-rarefactions": Scenario("2d-rarefactions", 2, 0.2, (
        _q("x > 0.5, y > 0.5", 1.0, 0.0, 0.0, 1.0),
        _q("x < 0.5, y > 0.5", 0.5197, -0.7259, 0.0, 0.4),
        _q("x < 0.5, y < 0.5", 1.0, -0.7259, -0.7259, 1.0),
        _q("x > 0.5, y < 0.5", 0.5197, 0.0, -0.7259, 0.4),
    ), reference="fine:256", description="four interacting rarefactions"),
    "2d-contacts": Scenario("2d-contacts", 2, 0.2, (
        _q("x > 0.5, y > 0.5", 0.5, 0.5, -0.5, 5.0),
        _q("x < 0.5, y > 0.5", 1.0, 0.5, 0.5, 5.0),
        _q("x < 0.5, y < 0.5", 2.0, -0.5, 0.5, 5.0),
        _q("x > 0.5, y < 0.5", 1.5, -0.5, -0.5, 5.0),
    ), reference="fine:256", description="four interacting contact discontinuities"),
    "2d-shocks": Scenario("2d-shocks", 2, 0.35, (
        _q("x > 0.5, y > 0.5", 1.5, 0.0, 0.0, 1.5),
        _q("x < 0.5, y > 0.5", 0.5323, 1.206, 0.0, 0.3),
        _q("x < 0.5, y < 0.5", 0.138, 1.206, 1.206, 0.029),
        _q("x > 0.5, y < 0.5", 0.5323, 0.0, 1.206, 0.3),
    ), reference="fine:256", description="four interacting shocks"),
    "2d-mixed": Scenario("2d-mixed", 2, 0.25, (
        _q("x > 0.5, y > 0.5", 0.5313, 0.0, 0.0, 0.4),
        _q("x < 0.5, y > 0.5", 1.0, 0.7276, 0.0, 1.0),
        _q("x < 0.5, y < 0.5", 0.8, 0.0, 0.0, 1.0),
        _q("x > 0.5, y < 0.5", 1.0, 0.0, 0.7276, 1.0),
    ), reference="fine:256", description="two contacts and two shocks"),
}


def names() -> list[str]:
    return list(_BUILTINS)


def builtin(name: str) -> Scenario:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise UnknownScenario(f"unknown scenario {name!r}; builtins: {', '.join(_BUILTINS)}") from None


def _overlap(lo, hi, edges):
    """Fraction of each cell ``[edges[i], edges[i+1]]`` inside ``[lo, hi]``."""
    a = np.clip(edges[:-1], lo, hi)
    b = np.clip(edges[1:], lo, hi)
    return (b - a) / (edges[1:] - edges[:-1])


def initial_field(s: Scenario, mesh: StructMesh) -> CellField:
    """Exact cell averages of the piecewise-constant initial data.

    Each region is a box, so the overlap with a cell factorises per axis and the
    projection is exact whether or not interfaces align with mesh lines.
    """
    if mesh.dim != s.dim:
        raise ScenarioError(f"{s.name} is {s.dim}D but the mesh is {mesh.dim}D")
    gas = s.gas
    data = np.zeros((mesh.dim + 2,) + mesh.n)
    for region in s.regions:
        lo, hi = region.bounds(s.dim, s.origin, s.extent)
        frac = np.ones(mesh.n)
        for a in range(mesh.dim):
            f = _overlap(lo[a], hi[a], mesh.edges(a))
            shape = [1] * mesh.dim
            shape[a] = mesh.n[a]
            frac = frac * f.reshape(shape)
        U = cons_from_prim(region.state, gas).to_array()
        data += U.reshape((-1,) + (1,) * mesh.dim) * frac[None]
    cf = CellField(mesh, data)
    cf.meta["aligned"] = _aligned(s, mesh)
    return cf


def _aligned(s: Scenario, mesh: StructMesh) -> bool:
    for region in s.regions:
        lo, hi = region.bounds(s.dim, s.origin, s.extent)
        for a in range(s.dim):
            for v in (lo[a], hi[a]):
                k = (v - mesh.origin[a]) / mesh.h[a]
                if abs(k - round(k)) > 1e-12:
                    return False
    return True


def _validate(s: Scenario) -> None:
    if s.dim not in (1, 2, 3):
        raise ScenarioError(f"dim must be 1, 2 or 3, got {s.dim}")
    if not s.t_final > 0:
        raise ScenarioError("t_final must be positive")
    GasLaw(s.gamma)
    total = 0.0
    boxes = []
    for i, r in enumerate(s.regions):
        if len(r.vel) != s.dim:
            raise ScenarioError(f"regions[{i}] ({r.where!r}) has {len(r.vel)} velocity components, need {s.dim}")
        if not r.rho > 0:
            raise ScenarioError(f"regions[{i}] ({r.where!r}): density must be positive, got {r.rho}")
        if not r.p > 0:
            raise ScenarioError(f"regions[{i}] ({r.where!r}): pressure must be positive, got {r.p}")
        lo, hi = r.bounds(s.dim, s.origin, s.extent)
        vol = float(np.prod([max(0.0, b - a) for a, b in zip(lo, hi)]))
        if vol == 0:
            raise ScenarioError(f"regions[{i}] ({r.where!r}) is empty")
        total += vol
        boxes.append((lo, hi))
    for i in range(len(boxes)):
        for j in range(i):
            inter = np.prod([max(0.0, min(boxes[i][1][a], boxes[j][1][a]) - max(boxes[i][0][a], boxes[j][0][a]))
                             for a in range(s.dim)])
            if inter > 0:
                raise ScenarioError(f"regions[{j}] and regions[{i}] overlap")
    if abs(total - float(np.prod(s.extent))) > 1e-12 * float(np.prod(s.extent)):
        raise ScenarioError("regions do not cover the domain")


def parse_scenario(text: str) -> Scenario:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"not a valid scenario document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a mapping")
    allowed = {"name", "dim", "domain", "t_final", "gamma", "regions", "boundary", "reference", "description"}
    extra = set(doc) - allowed
    if extra:
        raise ScenarioError(f"unknown key(s): {', '.join(sorted(extra))}")
    for key in ("name", "dim", "t_final", "regions"):
        if key not in doc:
            raise ScenarioError(f"missing required key {key!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim not in (1, 2, 3):
        raise ScenarioError(f"key 'dim': expected 1, 2 or 3, got {dim!r}")
    domain = doc.get("domain") or {}
    origin = tuple(float(v) for v in domain.get("origin", (0.0,) * dim))
    extent = tuple(float(v) for v in domain.get("extent", (1.0,) * dim))
    if len(origin) != dim or len(extent) != dim:
        raise ScenarioError("key 'domain': origin/extent length must equal dim")
    regions = []
    if not isinstance(doc["regions"], list) or not doc["regions"]:
        raise ScenarioError("key 'regions': expected a non-empty list")
    for i, r in enumerate(doc["regions"]):
        if not isinstance(r, dict):
            raise ScenarioError(f"regions[{i}]: expected a mapping")
        missing = [k for k in ("where", "rho", "p", *VEL_KEYS[:dim]) if k not in r]
        if missing:
            raise ScenarioError(f"regions[{i}]: missing key(s) {', '.join(missing)}")
        extra = set(r) - {"where", "rho", "p", *VEL_KEYS[:dim]}
        if extra:
            raise ScenarioError(f"regions[{i}]: unknown key(s) {', '.join(sorted(extra))}")
        try:
            regions.append(Region(str(r["where"]), float(r["rho"]),
                                  tuple(float(r[k]) for k in VEL_KEYS[:dim]), float(r["p"])))
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"regions[{i}]: {exc}") from exc
    s = Scenario(name=str(doc["name"]), dim=dim, t_final=float(doc["t_final"]), regions=tuple(regions),
                 origin=origin, extent=extent, gamma=float(doc.get("gamma", 1.4)),
                 boundary=str(doc.get("boundary", "transmissive")),
                 reference=str(doc.get("reference", "exact" if dim == 1 else "fine:256")),
                 description=str(doc.get("description", "")))
    _validate(s)
    return s


def dump_scenario(s: Scenario) -> str:
    regions = []
    for r in s.regions:
        entry = {"where": r.where, "rho": r.rho}
        entry.update({k: v for k, v in zip(VEL_KEYS, r.vel)})
        entry["p"] = r.p
        regions.append(entry)
    doc = {"name": s.name, "dim": s.dim, "domain": {"origin": list(s.origin), "extent": list(s.extent)},
           "t_final": s.t_final, "gamma": s.gamma, "boundary": s.boundary, "reference": s.reference,
           "description": s.description, "regions": regions}
    return yaml.safe_dump(doc, sort_keys=False)


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return parse_scenario(fh.read())
