"""Dimension and curvature estimates for catalog sets at a reduced resolution.

Usage: python3 scripts/desk_table.py [--size 1024] [--sets gasket carpet ...]
Writes one CSV row per set to stdout.
"""
import argparse
import time

from fraccurv.estimators import box_dimension, gamma_estimates, joint_regression, local_dimension, sausage_dimension
from fraccurv.ifs import catalog_names, render
from fraccurv.minkowski import measure_profile
from fraccurv.raster import default_radii, distance_transform
from fraccurv.theory import NotAvailableError, reference_curvatures, rescale_curvature


def row(name: str, size: int, seed: int, brk: bool = True) -> list[str]:
    t0 = time.perf_counter()
    res = render(name, size, seed=seed)
    prof = measure_profile(distance_transform(res.image), default_radii(size, size), brk=brk)
    j2 = joint_regression(prof, (False, True, True)).s_hat
    j3 = joint_regression(prof, (True, True, True)).s_hat
    g = gamma_estimates(prof, res.s)
    g2 = rescale_curvature(g.gamma[2], 1 / res.framing.scale, res.s)
    seconds = time.perf_counter() - t0
    box = box_dimension(res.image, n_shifts=4).dimension
    local = local_dimension(res.image, seed=seed).mean
    try:
        ref = f"{reference_curvatures(name).x[2]:.4f}"
    except NotAvailableError:
        ref = ""
    vals = [res.s, sausage_dimension(prof), j2, j3, box, local, g2, g.xi0, g.xi1]
    return [name, *(f"{v:.4f}" for v in vals), ref, f"{seconds:.1f}"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-break", action="store_true", help="measure every radius (connected sets)")
    ap.add_argument("--sets", nargs="+", default=catalog_names())
    args = ap.parse_args()
    print("set,s,sausage,joint2,joint3,box,local,gamma2_base1,xi0,xi1,gamma2_ref,seconds")
    for name in args.sets:
        try:
            cells = row(name, args.size, args.seed, not args.no_break)
        except ValueError as exc:
            cells = [name, f"error: {exc}"]
        print(",".join(cells), flush=True)


if __name__ == "__main__":
    main()
