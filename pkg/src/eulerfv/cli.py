"""Command-line front end.

    eulerfv solve sod --n 128 --dump sod.dat --stats sod.csv
    eulerfv convergence single-r --ladder 32:1024 --ref exact --out table.csv
    eulerfv riemann 1,0,1 0.125,0,0.1 --profile 0.15 200 --dump fan.dat
    eulerfv list-scenarios
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .diagnostics import COMPARISONS
from .gas import GasLaw, NonPhysicalState, PrimState
from .grid import NonNestedMesh, StructMesh, MeshMismatch, write_dump
from .riemann import VacuumFormation, exact_profile, solve_star
from .scenarios import Scenario, ScenarioError, UnknownScenario, builtin, load_scenario, names
from .scheme import DT_RULES, MonitorViolation, Scheme, write_stats
from .study import DEFAULT_CFL, ReferenceSpec, convergence_study, ladder, run_scenario

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("eulerfv")


class UsageError(Exception):
    pass


def _scenario(args) -> Scenario:
    if args.scenario_file:
        s = load_scenario(args.scenario_file)
    else:
        if not args.scenario:
            raise UsageError("give a scenario name or --scenario-file")
        try:
            s = builtin(args.scenario)
        except UnknownScenario:
            raise UsageError(f"unknown scenario {args.scenario!r}; built-ins: {', '.join(names())}")
    if args.gamma is not None:
        s = replace(s, gamma=args.gamma)
        s.gas  # validates the range
    return s


def _scheme(args) -> Scheme:
    return Scheme(args.scheme, epsilon=args.vfv_epsilon, mu_scale=args.vfv_mu)


def _prim(text: str) -> PrimState:
    try:
        rho, u, p = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"state must be 'rho,u,p', got {text!r}")
    if rho <= 0 or p <= 0:
        raise UsageError(f"state {text!r} needs rho > 0 and p > 0")
    return PrimState(rho, u, p)


def _ladder(text: str) -> list[int]:
    a, sep, b = text.partition(":")
    if not sep or not a.isdigit() or not b.isdigit():
        raise UsageError(f"ladder must look like A:B, got {text!r}")
    try:
        return ladder(int(a), int(b))
    except ValueError as exc:
        raise UsageError(str(exc))


def _fmt_totals(t) -> str:
    return " ".join(f"{v:.12g}" for v in t)


def cmd_solve(args) -> int:
    s = _scenario(args)
    if args.n <= 0:
        raise UsageError("--n must be positive")
    scheme = _scheme(args)
    cfl = DEFAULT_CFL[scheme.kind] if args.cfl is None else args.cfl
    stats_every = args.stats_every if args.stats else 0
    cf, history = run_scenario(s, args.n, scheme, cfl, stats_every=stats_every, dt_rule=args.dt_rule)
    dump = args.dump or f"{s.name}-{scheme.kind}-{args.n}.dat"
    write_dump(cf, dump, s.gamma)
    if args.stats:
        write_stats(history, cf.mesh.dim, args.stats)
    first, last = history[0].totals, history[-1].totals
    print(f"scenario {s.name}  scheme {scheme.label}  n {args.n}  cfl {cfl:g}  T {cf.time:g}")
    print(f"boundary {s.boundary}")
    print(f"initial totals  {_fmt_totals(first)}")
    print(f"final totals    {_fmt_totals(last)}")
    print(f"delta           {_fmt_totals(last - first)}")
    print(f"rho_min {history[-1].rho_min:.6g}  p_min {history[-1].p_min:.6g}  "
          f"jump_l1 {history[-1].jump_l1:.6g}")
    print(f"dump written to {dump}")
    return EXIT_OK


def cmd_convergence(args) -> int:
    s = _scenario(args)
    ns = _ladder(args.ladder)
    ref_text = args.ref or s.reference
    try:
        ref = ReferenceSpec.parse(ref_text)
    except ValueError as exc:
        raise UsageError(str(exc))
    if ref.kind == "file" and not Path(ref.path).is_file():
        raise OSError(f"reference dump {ref.path} not found")
    scheme = _scheme(args)
    report = convergence_study(s, ns, scheme, args.cfl, ref, args.comparison)
    print(f"# {s.name}  {scheme.label}  reference {ref}")
    print(report.format_table())
    if args.out:
        out = Path(args.out)
        report.write_csv(out)
        out.with_suffix(".json").write_text(report.to_json() + "\n")
        print(f"report written to {out} and {out.with_suffix('.json')}")
    return EXIT_OK


def cmd_riemann(args) -> int:
    left, right = _prim(args.left), _prim(args.right)
    gas = GasLaw(1.4 if args.gamma is None else args.gamma)
    fan = solve_star(left, right, gas)
    print(f"p*      {float(fan.p_star):.12g}")
    print(f"u*      {float(fan.u_star):.12g}")
    print(f"waves   {fan.left_wave} / contact / {fan.right_wave}")
    print(f"rho*L   {float(fan.rho_star_left):.12g}")
    print(f"rho*R   {float(fan.rho_star_right):.12g}")
    if args.profile:
        t, n = float(args.profile[0]), int(args.profile[1])
        if t <= 0 or n <= 0:
            raise UsageError("--profile needs t > 0 and n > 0")
        cf = exact_profile(left, right, args.x0, t, StructMesh((n,)), gas)
        cf.time = t
        dump = args.dump or "riemann-profile.dat"
        write_dump(cf, dump, gas.gamma)
        print(f"profile written to {dump}")
    return EXIT_OK


def cmd_list(args) -> int:
    for name in names():
        s = builtin(name)
        print(f"{name:18s} {s.dim}D  T={s.t_final:<5g} ref={s.reference:9s} {s.description}")
    return EXIT_OK


def _add_run_flags(p):
    p.add_argument("scenario", nargs="?", help="built-in scenario name")
    p.add_argument("--scenario-file", help="YAML scenario document")
    p.add_argument("--scheme", choices=("godunov", "vfv"), default="godunov")
    p.add_argument("--cfl", type=float, help="default 0.9 (godunov) or 0.3 (vfv)")
    p.add_argument("--gamma", type=float, help="override the scenario's gamma")
    p.add_argument("--vfv-epsilon", type=float, default=1.0)
    p.add_argument("--vfv-mu", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eulerfv", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one scenario on one mesh")
    _add_run_flags(p)
    p.add_argument("--n", type=int, required=True, help="cells per axis")
    p.add_argument("--dump", help="final field dump (default <scenario>-<scheme>-<n>.dat)")
    p.add_argument("--stats", help="StepStats CSV")
    p.add_argument("--stats-every", type=int, default=1)
    p.add_argument("--dt-rule", choices=DT_RULES, default="sum")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("convergence", help="errors and orders over a mesh ladder")
    _add_run_flags(p)
    p.add_argument("--ladder", required=True, help="A:B, powers of two from A to B")
    p.add_argument("--ref", help="exact | exact:N | fine:N | file:PATH (default from scenario)")
    p.add_argument("--comparison", choices=COMPARISONS, default="prolong")
    p.add_argument("--out", help="CSV path; a JSON twin is written next to it")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("riemann", help="exact solution of a 1D Riemann problem")
    p.add_argument("left", help="rho,u,p")
    p.add_argument("right", help="rho,u,p")
    p.add_argument("--gamma", type=float)
    p.add_argument("--profile", nargs=2, metavar=("T", "N"), help="write cell averages at time T on N cells")
    p.add_argument("--x0", type=float, default=0.5, help="initial jump position on [0, 1]")
    p.add_argument("--dump", help="profile dump path")
    p.set_defaults(func=cmd_riemann)

    p = sub.add_parser("list-scenarios", help="print the built-in scenarios")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ScenarioError, NonNestedMesh, MeshMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (VacuumFormation, MonitorViolation, NonPhysicalState) as exc:
        where = ""
        if isinstance(exc, MonitorViolation) and exc.time is not None:
            where = f" (t={exc.time:.6g}, cell={exc.cell})"
        print(f"runtime failure: {exc}{where}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
