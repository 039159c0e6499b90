"""Convergence studies: run a mesh ladder against a reference and tabulate errors."""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .diagnostics import ErrorReport, RefField, error_norms, exact_reference, reference_from_fine, relative_energy_norm
from .grid import CellField, NonNestedMesh, StructMesh, read_dump
from .scenarios import Scenario, initial_field
from .scheme import RunConfig, Scheme, run

log = logging.getLogger(__name__)

DEFAULT_CFL = {"godunov": 0.9, "vfv": 0.3}
EXACT_REFERENCE_CELLS = 20480


@dataclass(frozen=True)
class ReferenceSpec:
    kind: str  # "exact", "fine" or "file"
    n: int = 0
    path: str = ""

    @classmethod
    def parse(cls, text: str) -> "ReferenceSpec":
        if text == "exact":
            return cls("exact", n=EXACT_REFERENCE_CELLS)
        kind, _, arg = text.partition(":")
        if kind in ("fine", "exact") and arg.isdigit() and int(arg) > 0:
            return cls(kind, n=int(arg))
        if kind == "file" and arg:
            return cls("file", path=arg)
        raise ValueError(f"reference must be exact, fine:N or file:PATH, got {text!r}")

    def __str__(self):
        return {"exact": f"exact:{self.n}", "fine": f"fine:{self.n}", "file": f"file:{self.path}"}[self.kind]


def ladder(a: int, b: int) -> list[int]:
    """Powers-of-two ladder ``a, 2a, ..., b``."""
    if a <= 0 or b < a:
        raise ValueError(f"invalid ladder {a}:{b}")
    out = [a]
    while out[-1] < b:
        out.append(out[-1] * 2)
    if out[-1] != b:
        raise ValueError(f"{b} is not {a} times a power of two")
    return out


def run_scenario(s: Scenario, n: int, scheme: Scheme, cfl: float | None = None, **kw):
    cfl = DEFAULT_CFL[scheme.kind] if cfl is None else cfl
    mesh = s.mesh(n)
    config = RunConfig(t_final=s.t_final, scheme=scheme, boundaries=s.boundary, cfl=cfl,
                       gamma=s.gamma, **kw)
    return run(config, initial_field(s, mesh))


class ReferenceProvider:
    """Builds and caches the reference solution of one scenario.

    Exact references are the cell averages of the exact Riemann solution on a
    fine mesh of ``source.n`` cells; fine references are a numerical run (or a
    dumped field) on a fine mesh.
    """

    def __init__(self, s: Scenario, source: ReferenceSpec, scheme: Scheme, cfl: float | None = None,
                 subsamples: int = 4):
        self.s, self.source, self.scheme, self.cfl = s, source, scheme, cfl
        self.subsamples = subsamples
        self._fine: CellField | None = None
        self._ref: RefField | None = None

    @property
    def fine(self) -> CellField:
        if self._fine is None:
            if self.source.kind == "fine":
                log.info("computing %s reference on %d cells per axis", self.s.name, self.source.n)
                self._fine, _ = run_scenario(self.s, self.source.n, self.scheme, self.cfl)
            elif self.source.kind == "file":
                self._fine, _ = read_dump(self.source.path)
            else:
                raise ValueError("exact references have no fine field")
        return self._fine

    @property
    def mesh(self) -> StructMesh:
        if self.source.kind == "file":
            return self.fine.mesh
        return self.s.mesh(self.source.n)

    def check(self, ns) -> None:
        if self.source.kind == "exact":
            self.s.riemann_data()
        n_ref = self.mesh.n[0]
        for n in ns:
            if n_ref % n:
                raise NonNestedMesh(f"ladder entry {n} does not divide the reference resolution {n_ref}")

    def reference(self) -> RefField:
        if self._ref is None:
            gas = self.s.gas
            if self.source.kind == "exact":
                left, right, x0 = self.s.riemann_data()
                self._ref = exact_reference(left, right, x0, self.s.t_final, self.mesh, gas, self.subsamples)
            else:
                self._ref = reference_from_fine(self.fine, gas)
        return self._ref


def convergence_study(s: Scenario, ns, scheme: Scheme = Scheme(), cfl: float | None = None,
                      reference: ReferenceSpec | str = "exact", comparison: str = "prolong",
                      reference_scheme: Scheme | None = None) -> ErrorReport:
    """Errors of ``scheme`` on every mesh of ``ns`` against one shared reference.

    Fine-mesh references are computed with ``reference_scheme`` (default: Godunov).
    """
    if isinstance(reference, str):
        reference = ReferenceSpec.parse(reference)
    ns = list(ns)
    if len(ns) < 2:
        raise ValueError("a convergence study needs at least two meshes")
    provider = ReferenceProvider(s, reference, reference_scheme or Scheme())
    provider.check(ns)
    ref = provider.reference()
    gas = s.gas
    report = ErrorReport(meta={
        "scenario": s.name, "scheme": scheme.label, "cfl": DEFAULT_CFL[scheme.kind] if cfl is None else cfl,
        "gamma": s.gamma, "T": s.t_final, "reference": str(reference), "ladder": ns,
        "comparison": comparison,
    })
    for n in ns:
        cf, _ = run_scenario(s, n, scheme, cfl)
        e_rho, e_mom, e_eta = error_norms(cf, ref, gas, comparison)
        report.add(n, e_rho, e_mom, e_eta, relative_energy_norm(cf, ref, gas, comparison))
        log.info("n=%d done", n)
    return report
