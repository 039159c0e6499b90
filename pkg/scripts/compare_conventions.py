"""Effect of how a coarse solution is compared with a fine reference.

``prolong`` extends the coarse cell values onto the reference mesh before
taking norms; ``restrict`` averages the reference onto the coarse mesh. The
first keeps the coarse mesh's own projection error inside the measured error.
"""
import argparse

from eulerfv.scenarios import builtin
from eulerfv.scheme import Scheme
from eulerfv.study import convergence_study, ladder


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("scenarios", nargs="*", default=["sod", "single-c", "single-r", "double-r"])
    args = ap.parse_args()
    for name in args.scenarios:
        for comparison in ("prolong", "restrict"):
            r = convergence_study(builtin(name), ladder(32, 1024), Scheme(), comparison=comparison)
            orders = ", ".join(f"{o:.3f}" for o in r.orders("rho")[1:])
            print(f"{name:10s} {comparison:9s} e_rho(32)={r.errors['rho'][0]:.4f}  "
                  f"e_RE(32)={r.errors['RE'][0]:.6f}  rho-EOC [{orders}]")


if __name__ == "__main__":
    main()
