"""Dimension and curvature estimators on binary images and functional profiles."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .minkowski import FunctionalProfile


class InsufficientDataError(ValueError):
    pass


class SingularDesignError(ValueError):
    pass


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    den = xc @ xc
    if den == 0:
        raise SingularDesignError("constant abscissae")
    return float(xc @ (y - y.mean()) / den)


# ---------------------------------------------------------------- box counting

def _radical_inverse(i: int, base: int) -> float:
    f, out = 1.0, 0.0
    while i:
        f /= base
        out += f * (i % base)
        i //= base
    return out


def box_offsets(delta: int, n_shifts: int) -> list[tuple[int, int]]:
    """Deterministic grid offsets in [0, delta)^2.

    A 2-3 Halton sequence starting at (0, 0): any prefix is spread evenly and
    longer lists extend shorter ones, so the minimum count over offsets can
    only decrease as ``n_shifts`` grows.
    """
    out, seen = [], set()
    i = 0
    while len(out) < min(n_shifts, delta * delta):
        o = (int(delta * _radical_inverse(i, 2)), int(delta * _radical_inverse(i, 3)))
        i += 1
        if o not in seen:
            seen.add(o)
            out.append(o)
    return out


def box_count(img: np.ndarray, delta: int, n_shifts: int = 1) -> int:
    """Fewest delta-boxes meeting the foreground over ``n_shifts`` grid offsets."""
    img = np.asarray(img, dtype=bool)
    h, w = img.shape
    if not 1 <= delta <= min(h, w):
        raise ValueError("delta must lie in [1, min(width, height)]")
    if n_shifts < 1:
        raise ValueError("n_shifts must be positive")
    rows, cols = np.nonzero(img)
    if rows.size == 0:
        return 0
    best = None
    span = (w + 2 * delta) // delta + 1
    for oy, ox in box_offsets(delta, n_shifts):
        key = ((rows + oy) // delta) * span + (cols + ox) // delta
        n = np.unique(key).size
        best = n if best is None else min(best, n)
    return int(best)


def box_ladder(delta_min: int, delta_max: int, factor: float) -> list[int]:
    out, d = [], int(delta_max)
    while d >= delta_min:
        if not out or d < out[-1]:
            out.append(d)
        d = int(math.floor(d / factor))
    return out


@dataclass(frozen=True)
class BoxDimensionResult:
    dimension: float
    deltas: tuple[int, ...]
    counts: tuple[int, ...]


def box_dimension(
    img: np.ndarray,
    delta_min: int = 1,
    delta_max: int | None = None,
    factor: float = 1.4,
    n_shifts: int = 1,
) -> BoxDimensionResult:
    """Least-squares slope of log N_delta against log(1/delta)."""
    if factor <= 1:
        raise ValueError("factor must exceed 1")
    h, w = np.shape(img)
    if delta_max is None:
        delta_max = int(math.hypot(w, h) / 4)
    delta_max = min(delta_max, h, w)
    deltas = box_ladder(max(delta_min, 1), delta_max, factor)
    if len(deltas) < 2:
        raise InsufficientDataError("box ladder has fewer than two sizes")
    counts = [box_count(img, d, n_shifts) for d in deltas]
    dim = _slope(-np.log(deltas), np.log(counts))
    return BoxDimensionResult(dim, tuple(deltas), tuple(counts))


# ---------------------------------------------------------------- sausage method

def sausage_dimension(profile: FunctionalProfile) -> float:
    """2 minus the slope of log(area) against log(r)."""
    r = profile.r
    c2 = profile.column("c2")
    ok = c2 > 0
    if np.count_nonzero(ok) < 2:
        raise InsufficientDataError("need two samples with positive area")
    return 2.0 - _slope(np.log(r[ok]), np.log(c2[ok]))


# ---------------------------------------------------------------- joint regression

@dataclass(frozen=True)
class RegressionResult:
    s_hat: float
    d_hat: tuple[float, float, float]
    used: tuple[bool, bool, bool]
    residual: float
    m: int


def joint_regression(
    profile: FunctionalProfile,
    use: tuple[bool, bool, bool] = (False, True, True),
) -> RegressionResult:
    """Common slope and separate intercepts for the datasets y0, y1, y2.

    Model: y_kj = D_k + s * x_j for every enabled k.  A sample whose y_k is
    undefined is dropped from dataset k only.  ``use`` is ordered
    (euler, boundary length, area).
    """
    return regress_datasets(profile.x, profile.y(), use)


def regress_datasets(x, y, use=(True, True, True)) -> RegressionResult:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).reshape(3, -1)
    if not any(use):
        raise ValueError("at least one dataset must be enabled")
    num = den = 0.0
    parts = {}
    for k in range(3):
        if not use[k]:
            continue
        ok = np.isfinite(y[k])
        xk, yk = x[ok], y[k][ok]
        if xk.size == 0:
            continue
        xc = xk - xk.mean()
        num += xc @ yk
        den += xc @ xc
        parts[k] = (xk, yk)
    m = sum(p[0].size for p in parts.values())
    if m < 2 or den <= 1e-300 * max(m, 1):
        raise SingularDesignError("regression design is singular (need varying x)")
    s = num / den
    d_hat = [math.nan] * 3
    sse = 0.0
    for k, (xk, yk) in parts.items():
        d_hat[k] = float(yk.mean() - s * xk.mean())
        sse += float(np.sum((yk - d_hat[k] - s * xk) ** 2))
    return RegressionResult(float(s), tuple(d_hat), tuple(bool(u) for u in use), sse / m, m)


# ---------------------------------------------------------------- averaged curvatures

@dataclass(frozen=True)
class CurvatureEstimates:
    gamma: tuple[float, float, float]
    s_used: float
    xi0: float = math.nan
    xi1: float = math.nan

    @property
    def xi_defined(self) -> bool:
        return self.gamma[2] > 0


def histogram_edges(x: np.ndarray) -> np.ndarray:
    """Cell edges t_0 < ... < t_m around sorted abscissae x_1 < ... < x_m.

    Inner edges are midpoints; the outer cells extend by half the median gap.
    """
    x = np.sort(np.asarray(x, dtype=float))
    if x.size == 1:
        return np.array([x[0] - 0.5, x[0] + 0.5])
    a = float(np.median(np.diff(x))) / 2
    return np.concatenate([[x[0] - a], (x[1:] + x[:-1]) / 2, [x[-1] + a]])


def averaged_curvature(x, c, s: float, k: int) -> float:
    """Average of e^{-(s-k)x} C_k over the x-range, in sign-split log form."""
    x = np.asarray(x, dtype=float)
    c = np.asarray(c, dtype=float)
    order = np.argsort(x)
    x, c = x[order], c[order]
    t = histogram_edges(x)
    wts = np.diff(t)
    mag = np.zeros_like(c)
    nz = c != 0
    mag[nz] = np.exp(-s * x[nz] + np.log(np.abs(c[nz])) + k * x[nz])
    return float(np.sum(np.sign(c) * mag * wts) / (t[-1] - t[0]))


def gamma_estimates(profile: FunctionalProfile, s_hat: float) -> CurvatureEstimates:
    """Averaged fractal curvatures Gamma_k and specific curvatures Xi_k.

    Gamma_0 uses the signed Euler number, Gamma_1 and Gamma_2 the boundary
    length and area.  Units are pixel^s.
    """
    if len(profile) < 1:
        raise InsufficientDataError("empty profile")
    if not math.isfinite(s_hat):
        raise ValueError("s_hat must be finite")
    x = profile.x
    cols = (profile.column("c0"), profile.column("c1"), profile.column("c2"))
    g = tuple(averaged_curvature(x, cols[k], s_hat, k) for k in range(3))
    if g[2] > 0:
        return CurvatureEstimates(g, float(s_hat), g[0] / g[2], g[1] / g[2])
    return CurvatureEstimates(g, float(s_hat))


# ---------------------------------------------------------------- local dimension

@dataclass(frozen=True)
class LocalDimReport:
    estimates: np.ndarray
    bin_edges: np.ndarray
    counts: np.ndarray
    mean: float
    mode_bin: float
    n_sample: int
    saturated: bool = False
    meta: dict = field(default_factory=dict)


def _histogram(vals: np.ndarray, width: float):
    if vals.size == 0:
        return np.array([0.0, width]), np.zeros(1, dtype=int)
    lo = math.floor(vals.min() / width) * width
    nb = max(int(math.ceil((vals.max() - lo) / width + 1e-9)), 1)
    edges = lo + width * np.arange(nb + 1)
    counts, _ = np.histogram(vals, bins=edges)
    return edges, counts


def local_dimension(
    img: np.ndarray,
    m_test: int = 1050,
    n_sample: int | None = None,
    a: float = 1.0,
    b: float = 2.0,
    seed: int = 0,
    bin_width: float = 0.0025,
) -> LocalDimReport:
    """Nearest-neighbour local dimension estimates at random foreground points.

    Test and sample points are foreground pixels drawn uniformly with a
    uniform in-pixel offset.  For each test point y, rho_n is the distance to
    the nearest of the n sample points, with coordinates scaled so the longer
    image side has length 1, and the estimate is

        alpha(y) = -a * log(n) / log(b * rho_n(y)).

    Non-finite or non-positive values are kept in ``estimates`` but excluded
    from the mean and the histogram.
    """
    img = np.asarray(img, dtype=bool)
    rows, cols = np.nonzero(img)
    fg = rows.size
    if fg < 2:
        raise InsufficientDataError("need at least two foreground pixels")
    if n_sample is None:
        n_sample = max(int(round(0.8 * fg)), 2)
    if m_test < 1 or n_sample < 2:
        raise ValueError("m_test >= 1 and n_sample >= 2 required")
    rng = np.random.default_rng(seed)
    scale = 1.0 / max(img.shape)
    pix = np.column_stack([cols, rows]).astype(float)

    def draw(n):
        return (pix[rng.integers(0, fg, n)] + rng.random((n, 2))) * scale

    sample = draw(n_sample)
    test = draw(m_test)
    rho, _ = cKDTree(sample).query(test, k=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ln = np.log(b * rho) / (-a * math.log(n_sample))
        est = 1.0 / ln
    good = est[np.isfinite(est) & (est > 0)]
    edges, counts = _histogram(good, bin_width)
    mean = float(good.mean()) if good.size else math.nan
    mode = float(edges[np.argmax(counts)] + bin_width / 2) if good.size else math.nan
    return LocalDimReport(
        estimates=est,
        bin_edges=edges,
        counts=counts,
        mean=mean,
        mode_bin=mode,
        n_sample=n_sample,
        saturated=n_sample > 10 * fg,
        meta={"foreground": fg, "m_test": m_test, "a": a, "b": b, "seed": seed},
    )


# ---------------------------------------------------------------- lacunarity

def gliding_box_lacunarity(img: np.ndarray, box_sizes) -> list[tuple[int, float]]:
    """Lambda(r) = Z2 / Z1^2 of box masses over all r x r positions in the image."""
    img = np.asarray(img, dtype=np.int64)
    h, w = img.shape
    sat = np.zeros((h + 1, w + 1), dtype=np.int64)
    sat[1:, 1:] = img.cumsum(0).cumsum(1)
    out = []
    for r in box_sizes:
        r = int(r)
        if not 1 <= r <= min(h, w):
            raise ValueError(f"box size {r} outside [1, {min(h, w)}]")
        mass = sat[r:, r:] - sat[:-r, r:] - sat[r:, :-r] + sat[:-r, :-r]
        z1 = mass.mean()
        z2 = (mass.astype(float) ** 2).mean()
        out.append((r, float(z2 / z1**2) if z1 > 0 else math.nan))
    return out


# ---------------------------------------------------------------- output files

def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else f"{v:.12g}"
    return str(v)


def estimates_csv(rows) -> str:
    """rows: iterable of (estimator, value, aux)."""
    buf = io.StringIO()
    buf.write("estimator,value,aux\n")
    for name, value, aux in rows:
        buf.write(f"{name},{_cell(value)},{_cell(aux)}\n")
    return buf.getvalue()


def histogram_csv(report: LocalDimReport) -> str:
    buf = io.StringIO()
    buf.write("bin_left,count\n")
    for left, n in zip(report.bin_edges[:-1], report.counts):
        buf.write(f"{left:.12g},{int(n)}\n")
    return buf.getvalue()


def yk_vs_x_dat(profile: FunctionalProfile) -> str:
    buf = io.StringIO()
    buf.write("# x y0 y1 y2\n")
    y = profile.y()
    for j, x in enumerate(profile.x):
        buf.write(" ".join(f"{v:.12g}" for v in (x, y[0, j], y[1, j], y[2, j])) + "\n")
    return buf.getvalue()
