"""Planar iterated function systems of similarities and chaos-game rendering."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit
from scipy.spatial import ConvexHull, QhullError


class DegenerateGeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Similarity:
    """p -> ratio * Rot(rotation) * Refl(p) + translation.

    ``Refl`` flips the sign of the y coordinate and is applied only when
    ``reflected`` is set.
    """

    ratio: float
    rotation: float = 0.0
    reflected: bool = False
    translation: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise ValueError(f"similarity ratio must lie in (0, 1), got {self.ratio}")
        object.__setattr__(self, "translation", (float(self.translation[0]), float(self.translation[1])))

    @property
    def linear(self) -> np.ndarray:
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        m = np.array([[c, -s], [s, c]])
        if self.reflected:
            m = m @ np.diag([1.0, -1.0])
        return self.ratio * m

    def fixed_point(self) -> np.ndarray:
        return np.linalg.solve(np.eye(2) - self.linear, np.asarray(self.translation))


def apply(f: Similarity, p) -> np.ndarray:
    """Apply ``f`` to a point or to an ``(n, 2)`` array of points."""
    p = np.asarray(p, dtype=float)
    return p @ f.linear.T + np.asarray(f.translation)


@dataclass(frozen=True)
class IteratedFunctionSystem:
    maps: tuple[Similarity, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(self.maps) < 2:
            raise ValueError("an IFS needs at least two maps")

    @property
    def ratios(self) -> list[float]:
        return [f.ratio for f in self.maps]

    @property
    def dimension(self) -> float:
        return similarity_dimension(self.ratios)


def _check_ratios(ratios: Sequence[float]) -> list[float]:
    ratios = [float(r) for r in ratios]
    if not ratios:
        raise ValueError("ratio list is empty")
    for r in ratios:
        if not 0.0 < r < 1.0:
            raise ValueError(f"ratio {r} outside (0, 1)")
    return ratios


def similarity_dimension(ratios: Sequence[float]) -> float:
    """Solve sum(r_i**s) == 1 for s by bisection.

    A single map only admits the boundary solution s = 0.
    """
    ratios = _check_ratios(ratios)
    if len(ratios) == 1:
        return 0.0
    r = np.asarray(ratios)

    def excess(s):
        return float(np.sum(r**s)) - 1.0

    lo, hi = 0.0, 1.0
    while excess(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return lo if abs(excess(lo)) <= abs(excess(hi)) else hi


@dataclass(frozen=True)
class ArithmeticClass:
    """``h`` is the lattice step of the log-ratios, or None when non-arithmetic."""

    h: float | None

    @property
    def arithmetic(self) -> bool:
        return self.h is not None

    def __str__(self):
        return f"arithmetic(h={self.h:.12g})" if self.arithmetic else "non-arithmetic"


def arithmetic_class(ratios: Sequence[float], tol: float = 1e-9) -> ArithmeticClass:
    """Real Euclidean GCD of the values -log r_i.

    The GCD chain is abandoned (non-arithmetic) once the candidate drops
    below 1e-6 * max|log r_i|.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    logs = [-math.log(r) for r in _check_ratios(ratios)]
    floor = 1e-6 * max(logs)
    h = logs[0]
    for v in logs[1:]:
        a, b = max(h, v), min(h, v)
        while True:
            if b < floor:
                return ArithmeticClass(None)
            rem = math.fmod(a, b)
            slack = tol * a
            if rem <= slack or b - rem <= slack:
                break
            a, b = b, rem
        h = b
    return ArithmeticClass(h)


class SampleSetId(str, enum.Enum):
    SIERPINSKI_GASKET = "gasket"
    SIERPINSKI_CARPET = "carpet"
    SIERPINSKI_TREE = "tree"
    CANTOR_DUST = "cantor"
    KOCH_CURVE = "koch"
    MODIFIED_CARPET = "modcarpet"
    TRIPET = "tripet"
    TRIANGLE_DELTA = "triangle"
    SHEARED_GASKET = "sheared-gasket"


def _around(ratio, rotation, cell_center, reflected=False, pivot=(0.5, 0.5)):
    # similarity that maps ``pivot`` onto ``cell_center``
    f = Similarity(ratio, rotation, reflected)
    t = np.asarray(cell_center) - f.linear @ np.asarray(pivot)
    return Similarity(ratio, rotation, reflected, tuple(t))


def _gasket_on(vertices, name):
    return IteratedFunctionSystem(
        [Similarity(0.5, 0.0, False, tuple(0.5 * np.asarray(v))) for v in vertices], name
    )


def _triangle_delta():
    # right angle at the origin, legs 0.6 (x) and 0.8 (y), hypotenuse 1
    r1, r2, r3 = 25 / 41, 20 / 41, 16 / 41
    b = np.array([0.6, 0.0])
    c = np.array([0.0, 0.8])
    # top copy: reflection across the bisector of the angle at c
    u = np.array([0.0, -1.0])
    v = (b - c) / np.linalg.norm(b - c)
    phi = math.atan2(*(u + v)[::-1])
    top = Similarity(r2, 2.0 * phi, True)
    top = Similarity(r2, 2.0 * phi, True, tuple(c - top.linear @ c))
    return IteratedFunctionSystem(
        [
            Similarity(r1, 0.0, False, tuple((1 - r1) * b)),
            top,
            Similarity(r3, 0.0, False, (0.0, 0.0)),
        ],
        SampleSetId.TRIANGLE_DELTA.value,
    )


def _tripet():
    # equilateral triangle cut into nine thirds; the central inverted one is dropped
    h = math.sqrt(3) / 2
    maps = []
    for row in range(3):
        for col in range(3 - row):
            maps.append(Similarity(1 / 3, 0.0, False, (col / 3 + row / 6, row * h / 3)))
    for row, col in [(0, 0), (0, 1)]:
        # inverted triangles of the bottom row: rotate by pi about the sub-centroid
        cx = (col + 1) / 3 + row / 6
        cy = row * h / 3 + 2 * h / 9
        maps.append(_around(1 / 3, math.pi, (cx, cy), pivot=(0.5, h / 3)))
    return IteratedFunctionSystem(maps, SampleSetId.TRIPET.value)


def _modified_carpet():
    # middle cell kept, top-middle cell removed; openings are turned inwards
    rot = {
        (0, 0): 0.0, (2, 0): 0.0, (1, 0): 0.0, (1, 1): 0.0,
        (0, 1): -math.pi / 2, (2, 1): math.pi / 2,
        (0, 2): math.pi, (2, 2): math.pi,
    }
    maps = [_around(1 / 3, a, ((i + 0.5) / 3, (j + 0.5) / 3)) for (i, j), a in rot.items()]
    return IteratedFunctionSystem(maps, SampleSetId.MODIFIED_CARPET.value)


def catalog(set_id: SampleSetId | str) -> IteratedFunctionSystem:
    """The built-in sample sets, each with reference edge of length 1."""
    sid = SampleSetId(set_id)
    if sid is SampleSetId.SIERPINSKI_GASKET:
        return _gasket_on([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)], sid.value)
    if sid is SampleSetId.SIERPINSKI_CARPET:
        maps = [Similarity(1 / 3, 0.0, False, (i / 3, j / 3))
                for j in range(3) for i in range(3) if (i, j) != (1, 1)]
        return IteratedFunctionSystem(maps, sid.value)
    if sid is SampleSetId.SIERPINSKI_TREE:
        return IteratedFunctionSystem(
            [
                Similarity(0.5, -math.pi / 2, False, (0.0, 1.0)),
                Similarity(0.5, 0.0, False, (0.0, 0.0)),
                Similarity(0.5, math.pi / 2, False, (1.0, 0.0)),
            ],
            sid.value,
        )
    if sid is SampleSetId.CANTOR_DUST:
        maps = [Similarity(1 / 3, 0.0, False, (i / 3, j / 3)) for j in (0, 2) for i in (0, 2)]
        return IteratedFunctionSystem(maps, sid.value)
    if sid is SampleSetId.KOCH_CURVE:
        t = 1 / 3
        return IteratedFunctionSystem(
            [
                Similarity(t, 0.0, False, (0.0, 0.0)),
                Similarity(t, math.pi / 3, False, (t, 0.0)),
                Similarity(t, -math.pi / 3, False, (0.5, math.sqrt(3) / 6)),
                Similarity(t, 0.0, False, (2 * t, 0.0)),
            ],
            sid.value,
        )
    if sid is SampleSetId.MODIFIED_CARPET:
        return _modified_carpet()
    if sid is SampleSetId.TRIPET:
        return _tripet()
    if sid is SampleSetId.TRIANGLE_DELTA:
        return _triangle_delta()
    return _gasket_on([(0, 0), (0.6, 0), (0, 0.8)], sid.value)


def catalog_names() -> list[str]:
    return [s.value for s in SampleSetId]


# ---------------------------------------------------------------- text format

def format_ifs(ifs: IteratedFunctionSystem) -> str:
    lines = [f"# {ifs.name}" if ifs.name else "# ifs", "# ratio rotation_deg reflect tx ty"]
    for f in ifs.maps:
        lines.append(
            f"{f.ratio:.17g} {math.degrees(f.rotation):.17g} {int(f.reflected)} "
            f"{f.translation[0]:.17g} {f.translation[1]:.17g}"
        )
    return "\n".join(lines) + "\n"


def parse_ifs(text: str, name: str = "") -> IteratedFunctionSystem:
    maps = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 5 fields, got {len(parts)}")
        ratio, deg = float(parts[0]), float(parts[1])
        if parts[2].lower() not in ("0", "1", "true", "false"):
            raise ValueError(f"line {lineno}: reflect flag must be 0/1")
        reflect = parts[2].lower() in ("1", "true")
        maps.append(Similarity(ratio, math.radians(deg), reflect, (float(parts[3]), float(parts[4]))))
    return IteratedFunctionSystem(maps, name)


# ---------------------------------------------------------------- chaos game

def attractor_bbox(ifs: IteratedFunctionSystem, tol: float = 1e-13, max_iter: int = 500):
    """Bounding box of the attractor via hull iteration from the fixed points.

    Every iterate lies on the attractor, so the box grows monotonically
    towards the true one at rate max(r_i) per step.
    """
    pts = np.array([f.fixed_point() for f in ifs.maps])
    lin = [(f.linear, np.asarray(f.translation)) for f in ifs.maps]
    box = np.r_[pts.min(0), pts.max(0)]
    for _ in range(max_iter):
        pts = np.vstack([pts @ m.T + t for m, t in lin])
        try:
            pts = pts[ConvexHull(pts).vertices]
        except (QhullError, ValueError):
            # collinear hull: keep the two extreme points along the main axis
            axis = np.argmax(np.ptp(pts, axis=0))
            pts = pts[[np.argmin(pts[:, axis]), np.argmax(pts[:, axis])]]
        new = np.r_[pts.min(0), pts.max(0)]
        done = np.max(np.abs(new - box)) <= tol * max(1.0, np.max(np.abs(new)))
        box = new
        if done:
            break
    return box  # xmin, ymin, xmax, ymax


@dataclass(frozen=True)
class Framing:
    """Affine model -> pixel map: col = floor(x0 + scale*x), row = H-1-floor(y0 + scale*y)."""

    scale: float
    x0: float
    y0: float
    width: int
    height: int


def fit_frame(ifs: IteratedFunctionSystem, width: int, height: int) -> Framing:
    xmin, ymin, xmax, ymax = attractor_bbox(ifs)
    ext_x, ext_y = xmax - xmin, ymax - ymin
    if max(ext_x, ext_y) <= 1e-12:
        raise DegenerateGeometryError("attractor collapses to a point")
    avail_x, avail_y = width - 2, height - 2
    scales = [a / e for a, e in ((avail_x, ext_x), (avail_y, ext_y)) if e > 1e-12]
    scale = min(scales) * (1.0 - 1e-9)
    # centre the attractor inside the one-pixel margin
    x0 = 1.0 + 0.5 * (avail_x - scale * ext_x) - scale * xmin
    y0 = 1.0 + 0.5 * (avail_y - scale * ext_y) - scale * ymin
    return Framing(scale, x0, y0, width, height)


@njit(cache=True)
def _orbit(coef, idx, x, y, burn, scale, x0, y0, img):
    h, w = img.shape
    for k in range(idx.shape[0]):
        i = idx[k]
        nx = coef[i, 0] * x + coef[i, 1] * y + coef[i, 4]
        ny = coef[i, 2] * x + coef[i, 3] * y + coef[i, 5]
        x, y = nx, ny
        if burn > 0:
            burn -= 1
            continue
        c = int(math.floor(x0 + scale * x))
        r = h - 1 - int(math.floor(y0 + scale * y))
        if 0 <= c < w and 0 <= r < h:
            img[r, c] = True
    return x, y, burn


@dataclass
class ChaosGameResult:
    image: np.ndarray
    framing: Framing
    n_points: int
    burn_in: int
    seed: int
    s: float
    rng: str = "numpy.random.PCG64"
    meta: dict = field(default_factory=dict)


def default_n_points(width: int, height: int, s: float) -> int:
    return int(min(50.0 * (width * height) ** (s / 2.0), 1e8))


def chaos_game(
    ifs: IteratedFunctionSystem,
    width: int,
    height: int,
    seed: int = 0,
    burn_in: int = 100,
    n_points: int | None = None,
    chunk: int = 1 << 22,
) -> ChaosGameResult:
    """Render the attractor by random iteration with weights r_i**s.

    The orbit starts at the fixed point of the first map, so every iterate
    already lies on the attractor; the first ``burn_in`` iterates are
    nevertheless not plotted.
    """
    if width < 16 or height < 16:
        raise ValueError("image must be at least 16x16")
    s = ifs.dimension
    if n_points is None:
        n_points = default_n_points(width, height, s)
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    frame = fit_frame(ifs, width, height)
    p = np.array(ifs.ratios) ** s
    cdf = np.cumsum(p / p.sum())
    cdf[-1] = 1.0
    coef = np.array([np.r_[f.linear.ravel(), f.translation] for f in ifs.maps])
    rng = np.random.Generator(np.random.PCG64(seed))
    img = np.zeros((height, width), dtype=np.bool_)
    x, y = ifs.maps[0].fixed_point()
    remaining = burn_in + n_points
    burn = burn_in
    while remaining > 0:
        n = min(chunk, remaining)
        idx = np.searchsorted(cdf, rng.random(n), side="right").astype(np.int64)
        x, y, burn = _orbit(coef, idx, x, y, burn, frame.scale, frame.x0, frame.y0, img)
        remaining -= n
    return ChaosGameResult(img, frame, int(n_points), int(burn_in), int(seed), s)


def render(set_id: SampleSetId | str, size: int, seed: int = 0, **kw) -> ChaosGameResult:
    return chaos_game(catalog(set_id), size, size, seed=seed, **kw)

