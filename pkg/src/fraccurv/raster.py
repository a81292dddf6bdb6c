"""Binary images: PBM I/O, exact Euclidean distance transform, dilation, radii.

Images are ``(height, width)`` boolean numpy arrays, ``True`` = black =
foreground.  A distance field is an int64 array of squared distances (in
squared pixel widths) from each pixel centre to the nearest foreground
pixel centre.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from numba import njit


class PBMError(ValueError):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} (byte offset {offset})")
        self.offset = offset


class EmptyForegroundError(ValueError):
    pass


# ---------------------------------------------------------------- PBM

def _header(data: bytes, count: int):
    """Read ``count`` integer tokens after the magic number; return (values, offset)."""
    pos, out = 2, []
    n = len(data)
    while len(out) < count:
        while pos < n and (data[pos:pos + 1].isspace() or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < n and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < n and data[pos:pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise PBMError("malformed header: expected an integer", start)
        out.append(int(data[start:pos]))
    return out, pos


def decode_pbm(data: bytes) -> np.ndarray:
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise PBMError(f"unsupported magic {magic!r}", 0)
    (w, h), pos = _header(data, 2)
    if w <= 0 or h <= 0:
        raise PBMError("non-positive image size", pos)
    if magic == b"P4":
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise PBMError("missing whitespace after header", pos)
        pos += 1
        row_bytes = (w + 7) // 8
        need = row_bytes * h
        if len(data) - pos < need:
            raise PBMError(f"truncated raster: need {need} bytes, have {len(data) - pos}", len(data))
        packed = np.frombuffer(data, dtype=np.uint8, count=need, offset=pos).reshape(h, row_bytes)
        return np.unpackbits(packed, axis=1)[:, :w].astype(bool)
    bits = np.empty(w * h, dtype=bool)
    k = 0
    n = len(data)
    while k < w * h:
        if pos >= n:
            raise PBMError(f"truncated raster: got {k} of {w * h} pixels", pos)
        ch = data[pos]
        if ch == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        if ch in b"01":
            bits[k] = ch == ord("1")
            k += 1
        elif not data[pos:pos + 1].isspace():
            raise PBMError(f"unexpected byte {bytes([ch])!r} in raster", pos)
        pos += 1
    return bits.reshape(h, w)


def encode_pbm(img: np.ndarray, plain: bool = False) -> bytes:
    img = np.asarray(img, dtype=bool)
    h, w = img.shape
    if plain:
        rows = [" ".join("1" if v else "0" for v in row) for row in img]
        return f"P1\n{w} {h}\n".encode() + "\n".join(rows).encode() + b"\n"
    return f"P4\n{w} {h}\n".encode() + np.packbits(img, axis=1).tobytes()


def load_pbm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return decode_pbm(fh.read())


def save_pbm(img: np.ndarray, path: str | os.PathLike, plain: bool = False) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_pbm(img, plain))


# ---------------------------------------------------------------- distance transform

@njit(cache=True)
def _edt_columns(img, g):
    h, w = img.shape
    for c in range(w):
        # forward / backward scan: distance to the nearest foreground pixel in this column
        d = -1
        for r in range(h):
            if img[r, c]:
                d = 0
            elif d >= 0:
                d += 1
            g[r, c] = d if d >= 0 else -1
        d = -1
        for r in range(h - 1, -1, -1):
            if img[r, c]:
                d = 0
            elif d >= 0:
                d += 1
            if d >= 0 and (g[r, c] < 0 or d < g[r, c]):
                g[r, c] = d


@njit(cache=True)
def _edt_rows(g, out):
    h, w = g.shape
    v = np.empty(w, dtype=np.int64)
    z = np.empty(w + 1, dtype=np.float64)
    f = np.empty(w, dtype=np.int64)
    for r in range(h):
        k = -1
        for q in range(w):
            if g[r, q] < 0:
                continue
            f[q] = g[r, q] * g[r, q]
            if k < 0:
                k = 0
                v[0] = q
                z[0] = -np.inf
                z[1] = np.inf
                continue
            while True:
                p = v[k]
                s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p))
                if s <= z[k]:
                    k -= 1
                    if k < 0:
                        break
                else:
                    break
            if k < 0:
                k = 0
                v[0] = q
                z[0] = -np.inf
                z[1] = np.inf
            else:
                k += 1
                v[k] = q
                z[k] = s
                z[k + 1] = np.inf
        j = 0
        for q in range(w):
            while z[j + 1] < q:
                j += 1
            p = v[j]
            out[r, q] = (q - p) * (q - p) + f[p]


def distance_transform(img: np.ndarray) -> np.ndarray:
    """Exact squared Euclidean distance to the nearest foreground pixel.

    Separable lower-envelope-of-parabolas algorithm: a column pass yields
    vertical distances, a row pass minimises (x - q)^2 + g(q)^2 over q.
    All arithmetic on squared distances is integer.
    """
    img = np.ascontiguousarray(img, dtype=np.bool_)
    if not img.any():
        raise EmptyForegroundError("image has no foreground pixels")
    g = np.empty(img.shape, dtype=np.int64)
    _edt_columns(img, g)
    out = np.empty(img.shape, dtype=np.int64)
    _edt_rows(g, out)
    return out


def radius_threshold(r: float) -> int:
    """Largest squared distance admitted by a dilation of radius ``r``."""
    return int(math.floor(r * r + 1e-9))


def dilate(field: np.ndarray, r: float) -> np.ndarray:
    """Parallel set {p : |p - F| <= r} as a boolean image."""
    if r < 0:
        raise ValueError("dilation radius must be non-negative")
    return field <= radius_threshold(r)


# ---------------------------------------------------------------- radii

def discrete_disk_area(r: float) -> int:
    """Number of lattice points p with |p| <= r."""
    t = radius_threshold(r)
    m = int(math.isqrt(t))
    a = np.arange(-m, m + 1)
    return int(np.count_nonzero(a[:, None] ** 2 + a[None, :] ** 2 <= t))


def _norm_levels(n_max: int):
    """Sorted distinct values of a^2 + b^2 <= n_max with their multiplicities."""
    m = math.isqrt(n_max)
    a = np.arange(-m, m + 1)
    sq = (a[:, None] ** 2 + a[None, :] ** 2).ravel()
    sq = sq[sq <= n_max]
    return np.unique(sq, return_counts=True)


def optimal_area_radii(r_max: float) -> list[float]:
    """All radii r <= r_max at which the discrete disk has area exactly pi*r^2.

    The discrete area is a step function of r; each step whose level A is
    crossed by pi*r^2 contributes r = sqrt(A/pi).
    """
    if r_max < math.sqrt(1 / math.pi) - 1e-12:
        raise ValueError("r_max must be at least sqrt(1/pi)")
    n_max = int(math.ceil(r_max * r_max)) + 1
    levels, counts = _norm_levels(n_max)
    area = np.cumsum(counts)
    out = []
    for i in range(len(levels) - 1):
        lo, hi = math.sqrt(levels[i]), math.sqrt(levels[i + 1])
        r = math.sqrt(area[i] / math.pi)
        if r > r_max:
            break
        if lo <= r < hi:
            out.append(r)
    return out


@dataclass(frozen=True)
class RadiusSchedule:
    radii: tuple[float, ...]
    policy: str = "geometric"

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size == 0:
            raise ValueError("radius schedule is empty")
        if np.any(r < 0) or np.any(np.diff(r) <= 0):
            raise ValueError("radii must be non-negative and strictly increasing")
        object.__setattr__(self, "radii", tuple(float(v) for v in r))

    def __len__(self):
        return len(self.radii)

    def to_csv(self) -> str:
        return "r\n" + "".join(f"{v:.12g}\n" for v in self.radii)


def default_r_max(width: int, height: int) -> float:
    return max(0.06 * min(width, height), 20.0)


def default_radii(
    width: int,
    height: int,
    r_min: float = 1.2616,
    step: float = 1.05,
    r_max: float | None = None,
) -> RadiusSchedule:
    """Geometric radii r_min * step**j up to r_max."""
    if step <= 1:
        raise ValueError("step must exceed 1")
    if r_min <= 0:
        raise ValueError("r_min must be positive")
    if r_max is None:
        r_max = default_r_max(width, height)
    n = int(math.floor(math.log(r_max / r_min) / math.log(step) + 1e-9)) + 1
    radii = [r_min * step**j for j in range(max(n, 1))]
    return RadiusSchedule(tuple(radii), "geometric")


def quick_radii(r_max: float, r_start: float = 0.5641, factor: float = 1.5) -> RadiusSchedule:
    """Optimal-area radii thinned to multiplicative spacing of about ``factor``."""
    pool = optimal_area_radii(max(r_max, 0.6))
    picked = [min(pool, key=lambda r: abs(math.log(r / r_start)))]
    while True:
        target = picked[-1] * factor
        ahead = [r for r in pool if r > picked[-1] * 1.0001]
        if not ahead:
            break
        nxt = min(ahead, key=lambda r: abs(math.log(r / target)))
        if nxt > r_max or nxt < picked[-1] * math.sqrt(factor):
            break
        picked.append(nxt)
    return RadiusSchedule(tuple(picked), "quick-optimal-area")
