"""Stability of the two multi-D time-step rules on the quadrant problems."""
import argparse

from eulerfv.riemann import VacuumFormation
from eulerfv.scenarios import builtin
from eulerfv.scheme import MonitorViolation, Scheme
from eulerfv.study import run_scenario

SCENARIOS = ["2d-rarefactions", "2d-contacts", "2d-shocks", "2d-mixed"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--cfl", type=float, default=0.9)
    args = ap.parse_args()
    for name in SCENARIOS:
        for rule in ("sum", "axis-min"):
            try:
                cf, hist = run_scenario(builtin(name), args.n, Scheme(), args.cfl, dt_rule=rule)
                status = f"ok, p_min {min(h.p_min for h in hist):.4g}"
            except (MonitorViolation, VacuumFormation) as exc:
                status = f"failed: {exc}"
            print(f"{name:16s} {rule:9s} {status}")


if __name__ == "__main__":
    main()
