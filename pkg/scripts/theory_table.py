"""Exact fractal curvatures of the reference sets, in base-1 units and rescaled.

Usage: python3 scripts/theory_table.py [--lam 2920]
"""
import argparse

from fraccurv.theory import reference_curvatures, reference_names


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lam", type=float, default=2920.0, help="pixels per unit length")
    args = ap.parse_args()
    print("set,s,eta,X0,X1,X2,xi0,xi1,X0_lam,X1_lam,X2_lam")
    for name in reference_names():
        t = reference_curvatures(name)
        cells = [t.s, t.eta, *t.x, t.xi0, t.xi1]
        scaled = t.rescaled(args.lam)
        print(",".join([name, *(f"{v:.9g}" for v in cells), *(f"{v:.0f}" for v in scaled)]))


if __name__ == "__main__":
    main()
