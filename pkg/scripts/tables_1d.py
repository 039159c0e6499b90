"""Error tables for the one-dimensional test cases.

Runs every 1D scenario over the 32..1024 ladder against the exact solution and
writes one CSV/JSON pair per scenario and scheme into ``--out``.
"""
import argparse
import logging
from pathlib import Path

from eulerfv.scenarios import builtin
from eulerfv.scheme import Scheme
from eulerfv.study import convergence_study, ladder

SCENARIOS = ["single-c", "single-r", "single-s", "double-r", "sod"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/1d")
    ap.add_argument("--ladder", default="32:1024")
    ap.add_argument("--schemes", nargs="+", default=["godunov", "vfv"], choices=["godunov", "vfv"])
    ap.add_argument("--comparison", default="prolong", choices=["prolong", "restrict"])
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    a, b = (int(v) for v in args.ladder.split(":"))
    for name in SCENARIOS:
        for kind in args.schemes:
            report = convergence_study(builtin(name), ladder(a, b), Scheme(kind), comparison=args.comparison)
            stem = out / f"{name}-{kind}"
            report.write_csv(stem.with_suffix(".csv"))
            stem.with_suffix(".json").write_text(report.to_json() + "\n")
            print(f"\n{name} / {report.meta['scheme']}")
            print(report.format_table())


if __name__ == "__main__":
    main()
