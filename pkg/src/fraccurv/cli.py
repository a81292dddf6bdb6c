"""Command-line interface: generate, measure, estimate, theory, radii.

Stages hand off through files: PBM images, profile CSV, estimates CSV.
Exit codes: 0 ok, 2 usage, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import estimators as est
from .ifs import DegenerateGeometryError, catalog, catalog_names, chaos_game, parse_ifs, arithmetic_class
from .minkowski import FunctionalProfile, load_profile, measure_profile, save_profile
from .raster import (
    EmptyForegroundError,
    PBMError,
    default_r_max,
    default_radii,
    distance_transform,
    load_pbm,
    optimal_area_radii,
    quick_radii,
    save_pbm,
)
from . import theory

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


def str2bool(v: str) -> bool:
    t = str(v).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {v!r}")


def _flag(p: argparse.ArgumentParser, name: str, default: bool, help: str):
    p.add_argument(
        name, type=str2bool, nargs="?", const=True, default=default, metavar="BOOL",
        help=f"{help} (default {str(default).lower()})",
    )


@dataclass(frozen=True)
class RunConfig:
    """Parameters shared by the measurement and estimation stages."""

    use_euler: bool = False
    use_bdlength: bool = True
    use_area: bool = True
    quick_evaluate: bool = False
    brk: bool = True
    r_min: float = 1.2616
    step: float = 1.05
    r_max: float | None = None
    seed: int = 0
    size: int = 1024

    @property
    def use(self) -> tuple[bool, bool, bool]:
        return (self.use_euler, self.use_bdlength, self.use_area)


def _config(a) -> RunConfig:
    return RunConfig(
        **{k: getattr(a, k) for k in RunConfig.__dataclass_fields__ if hasattr(a, k)}
    )


def _resolve_set(name: str):
    try:
        return catalog(name)
    except (KeyError, ValueError):
        raise UsageError(f"unknown set {name!r}; catalog: {', '.join(catalog_names())}") from None


# ---------------------------------------------------------------- subcommands

def cmd_generate(a) -> int:
    if a.size < 16:
        raise UsageError("--size must be at least 16")
    if a.ifs:
        ifs = parse_ifs(Path(a.ifs).read_text(), name=Path(a.ifs).stem)
    elif a.set:
        ifs = _resolve_set(a.set)
    else:
        raise UsageError(f"give --set or --ifs; catalog: {', '.join(catalog_names())}")
    res = chaos_game(ifs, a.size, a.size, seed=a.seed, n_points=a.n_points, burn_in=a.burn_in)
    out = Path(a.output)
    save_pbm(res.image, out, plain=a.plain)
    meta = {
        "ifs": ifs.name,
        "seed": res.seed,
        "n_points": res.n_points,
        "burn_in": res.burn_in,
        "s": res.s,
        "arithmetic_class": str(arithmetic_class(ifs.ratios)),
        "rng": res.rng,
        "width": a.size,
        "height": a.size,
        "pixels_per_unit": res.framing.scale,
    }
    out.with_name(out.name + ".json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"{out}: {a.size}x{a.size}, s={res.s:.6g}, n_points={res.n_points}")
    return EXIT_OK


def _schedule(cfg: RunConfig, w: int, h: int):
    r_max = cfg.r_max if cfg.r_max is not None else default_r_max(w, h)
    if cfg.quick_evaluate:
        return quick_radii(r_max)
    return default_radii(w, h, cfg.r_min, cfg.step, r_max)


def cmd_measure(a) -> int:
    cfg = _config(a)
    img = load_pbm(a.image)
    h, w = img.shape
    field = distance_transform(img)
    prof = measure_profile(field, _schedule(cfg, w, h), brk=cfg.brk, threads=a.threads)
    if cfg.brk and not prof.truncated_by_break:
        print(
            "warning: break condition N+Q<=2 never fired; the largest radius "
            "may still be too small to reach the trivial regime",
            file=sys.stderr,
        )
    if a.output:
        save_profile(prof, a.output)
    else:
        from .minkowski import profile_to_csv

        sys.stdout.write(profile_to_csv(prof))
    return EXIT_OK


def estimate_rows(prof: FunctionalProfile, cfg: RunConfig, s_gamma: float | None = None,
                  base_length: float | None = None):
    """Rows (estimator, value, aux) for a profile."""
    rows = []
    saus = est.sausage_dimension(prof)
    rows.append(("sausage", saus, ""))
    reg = est.joint_regression(prof, cfg.use)
    tag = "".join(n for n, u in zip(("euler", "bdlength", "area"), cfg.use) if u)
    rows.append(("joint_s", reg.s_hat, tag))
    for k in range(3):
        if cfg.use[k]:
            rows.append((f"D{k}", reg.d_hat[k], ""))
    rows.append(("residual", reg.residual, reg.m))
    s_used = reg.s_hat if s_gamma is None else s_gamma
    g = est.gamma_estimates(prof, s_used)
    for k in range(3):
        rows.append((f"gamma{k}", g.gamma[k], f"s={s_used:.12g}"))
    rows.append(("xi0", g.xi0, ""))
    rows.append(("xi1", g.xi1, ""))
    if base_length:
        for k in range(3):
            rows.append((f"gamma{k}_base1", g.gamma[k] / base_length**s_used, f"base={base_length:.12g}"))
    rows.append(("truncated_by_break", int(prof.truncated_by_break), len(prof)))
    return rows


def cmd_estimate(a) -> int:
    cfg = _config(a)
    if not any(cfg.use):
        raise UsageError("at least one of --use-euler/--use-bdlength/--use-area must be true")
    prof = load_profile(a.profile)
    if a.trim:
        prof = prof.trimmed(a.trim)
    rows = estimate_rows(prof, cfg, a.s, a.base_length)
    if a.image:
        img = load_pbm(a.image)
        bx = est.box_dimension(img, n_shifts=a.box_shifts)
        rows.append(("box", bx.dimension, len(bx.deltas)))
        ld = est.local_dimension(img, m_test=a.m_test, seed=cfg.seed)
        rows.append(("local", ld.mean, "saturated" if ld.saturated else ld.n_sample))
        if a.histogram:
            Path(a.histogram).write_text(est.histogram_csv(ld))
    text = est.estimates_csv(rows)
    if a.output:
        Path(a.output).write_text(text)
    else:
        sys.stdout.write(text)
    if a.plot:
        Path(a.plot).write_text(est.yk_vs_x_dat(prof))
    return EXIT_OK


def cmd_theory(a) -> int:
    if a.scaling:
        if not a.ifs:
            raise UsageError("--scaling needs --ifs for the ratios")
        ifs = parse_ifs(Path(a.ifs).read_text())
        rk = [theory.scaling_function_from_csv(Path(p).read_text()) for p in a.scaling]
        tc = theory.curvatures_from_scaling(rk, ifs.ratios, Path(a.ifs).stem)
    elif a.set == "triangle":
        tc = theory.triangle_curvatures()
    else:
        try:
            tc = theory.reference_curvatures(a.set)
        except theory.NotAvailableError:
            raise UsageError(
                f"no curvatures for {a.set!r}; available: {', '.join(theory.reference_names())}"
            ) from None
    x = tc.x if a.rescale is None else tc.rescaled(a.rescale)
    print("quantity,value")
    print(f"s,{tc.s:.12g}")
    print(f"eta,{tc.eta:.12g}")
    for k in range(3):
        print(f"X{k},{x[k]:.12g}")
    print(f"xi0,{tc.xi0:.12g}")
    print(f"xi1,{tc.xi1:.12g}")
    return EXIT_OK


def cmd_radii(a) -> int:
    rs = quick_radii(a.max).radii if a.quick else optimal_area_radii(a.max)
    print("r")
    for r in rs:
        print(f"{r:.12g}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _schedule_args(p):
    p.add_argument("--r-min", dest="r_min", type=float, default=1.2616)
    p.add_argument("--step", type=float, default=1.05)
    p.add_argument("--r-max", dest="r_max", type=float, default=None,
                   help="largest radius (default max(0.06*min(w,h), 20))")
    _flag(p, "--quick-evaluate", False, "use thinned optimal-area radii")
    _flag(p, "--brk", True, "stop once N+Q <= 2")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fraccurv", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="render an attractor by the chaos game")
    g.add_argument("--set", help=f"catalog name: {', '.join(catalog_names())}")
    g.add_argument("--ifs", help="IFS text file (ratio rotation_deg reflect tx ty per line)")
    g.add_argument("--size", type=int, default=1024)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n-points", dest="n_points", type=int, default=None)
    g.add_argument("--burn-in", dest="burn_in", type=int, default=100)
    g.add_argument("--plain", action="store_true", help="write ASCII P1 instead of P4")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    m = sub.add_parser("measure", help="dilation profile of a PBM image")
    m.add_argument("image")
    m.add_argument("-o", "--output")
    m.add_argument("--threads", type=int, default=1)
    _schedule_args(m)
    m.set_defaults(func=cmd_measure)

    e = sub.add_parser("estimate", help="dimension and curvature estimates from a profile")
    e.add_argument("profile")
    e.add_argument("-o", "--output")
    _flag(e, "--use-euler", False, "regress on y0")
    _flag(e, "--use-bdlength", True, "regress on y1")
    _flag(e, "--use-area", True, "regress on y2")
    e.add_argument("--s", type=float, default=None, help="dimension used for Gamma (default: fitted)")
    e.add_argument("--base-length", dest="base_length", type=float, default=None,
                   help="pixels per model unit, to also report Gamma at base length 1")
    e.add_argument("--trim", type=int, default=0, help="drop this many samples at the large-r end")
    e.add_argument("--plot", help="write y_k against x to this file")
    e.add_argument("--image", help="PBM image for box-counting and local dimension")
    e.add_argument("--histogram", help="local-dimension histogram CSV (needs --image)")
    e.add_argument("--m-test", dest="m_test", type=int, default=1050)
    e.add_argument("--box-shifts", dest="box_shifts", type=int, default=4)
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(func=cmd_estimate)

    t = sub.add_parser("theory", help="exact fractal curvatures")
    t.add_argument("--set", default="triangle",
                   help=f"one of: {', '.join(theory.reference_names())}")
    t.add_argument("--rescale", type=float, default=None, help="base length in pixels")
    t.add_argument("--scaling", nargs=3, metavar=("R0", "R1", "R2"),
                   help="scaling-function CSVs (b_lo,b_hi,c0,c1,c2)")
    t.add_argument("--ifs", help="IFS file supplying the ratios for --scaling")
    t.set_defaults(func=cmd_theory)

    r = sub.add_parser("radii", help="optimal-area dilation radii")
    r.add_argument("--max", type=float, default=6.0)
    r.add_argument("--quick", action="store_true", help="thinned quick list")
    r.set_defaults(func=cmd_radii)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return a.func(a)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (est.SingularDesignError, est.InsufficientDataError, theory.DivergenceError,
            DegenerateGeometryError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PBMError, EmptyForegroundError, OSError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
