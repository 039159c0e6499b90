"""Desk-scale error tables for the four 2D quadrant problems.

The reference is a Godunov run on a fine mesh (256^2 by default), so the
numbers track the published trend but not its values.
"""
import argparse
import logging
import time
from pathlib import Path

from eulerfv.scenarios import builtin
from eulerfv.scheme import Scheme
from eulerfv.study import convergence_study, ladder

SCENARIOS = ["2d-rarefactions", "2d-contacts", "2d-shocks", "2d-mixed"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/2d")
    ap.add_argument("--ladder", default="16:64")
    ap.add_argument("--ref", default="fine:256")
    ap.add_argument("--scheme", default="godunov", choices=["godunov", "vfv"])
    ap.add_argument("--only", nargs="*", default=SCENARIOS)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    a, b = (int(v) for v in args.ladder.split(":"))
    for name in args.only:
        t0 = time.perf_counter()
        report = convergence_study(builtin(name), ladder(a, b), Scheme(args.scheme), reference=args.ref)
        stem = out / f"{name}-{args.scheme}"
        report.write_csv(stem.with_suffix(".csv"))
        stem.with_suffix(".json").write_text(report.to_json() + "\n")
        print(f"\n{name} ({time.perf_counter() - t0:.0f} s)")
        print(report.format_table())


if __name__ == "__main__":
    main()
