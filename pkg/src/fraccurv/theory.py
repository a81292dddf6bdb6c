"""Exact fractal curvatures from piecewise-polynomial curvature scaling functions.

For a self-similar set with ratios r_i and dimension s, the k-th fractal
curvature is

    X_k = (1/eta) * integral_0^1 eps^(s-k-1) R_k(eps) d eps,
    eta = -sum_i r_i^s log r_i,

where R_k is the curvature scaling function of the set.  When every R_k is
piecewise polynomial the integral has a closed form, evaluated here
monomial by monomial.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .ifs import SampleSetId, similarity_dimension


class DivergenceError(ArithmeticError):
    pass


class NotAvailableError(KeyError):
    pass


@dataclass(frozen=True)
class PiecewisePoly:
    """Polynomial pieces on (b_{i-1}, b_i]; coefficients in increasing degree."""

    breakpoints: tuple[float, ...]
    coeffs: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        b = self.breakpoints
        if len(b) < 2 or len(self.coeffs) != len(b) - 1:
            raise ValueError("need M+1 breakpoints for M pieces")
        if any(hi <= lo for lo, hi in zip(b, b[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", tuple(float(v) for v in b))
        object.__setattr__(self, "coeffs", tuple(tuple(float(c) for c in p) for p in self.coeffs))

    @classmethod
    def from_pieces(cls, pieces) -> "PiecewisePoly":
        """Build from ``(lo, hi, coeffs)`` triples covering a contiguous range."""
        pieces = sorted(pieces, key=lambda p: p[0])
        for (_, hi, _), (lo, _, _) in zip(pieces, pieces[1:]):
            if not math.isclose(hi, lo, rel_tol=0, abs_tol=1e-12):
                raise ValueError("pieces must be contiguous")
        bps = [pieces[0][0]] + [p[1] for p in pieces]
        return cls(tuple(bps), tuple(tuple(p[2]) for p in pieces))

    @property
    def degree(self) -> int:
        return max(len(c) for c in self.coeffs) - 1

    def __call__(self, eps):
        eps = np.asarray(eps, dtype=float)
        b = np.asarray(self.breakpoints)
        idx = np.clip(np.searchsorted(b, eps, side="left") - 1, 0, len(self.coeffs) - 1)
        out = np.zeros_like(eps)
        for i, cs in enumerate(self.coeffs):
            sel = idx == i
            out[sel] = np.polynomial.polynomial.polyval(eps[sel], cs)
        return out if out.ndim else float(out)

    def pieces(self):
        b = self.breakpoints
        return [(b[i], b[i + 1], c) for i, c in enumerate(self.coeffs)]


def eta(ratios, s: float) -> float:
    r = np.asarray(ratios, dtype=float)
    if abs(np.sum(r**s) - 1) > 1e-9:
        raise ValueError("s is not the similarity dimension of these ratios")
    return float(-np.sum(r**s * np.log(r)))


def _monomial_integral(p: float, lo: float, hi: float) -> float:
    """Integral of eps^(p-1) over (lo, hi]."""
    if p == 0:
        if lo <= 0:
            raise DivergenceError("logarithmic divergence at 0")
        return math.log(hi / lo)
    if p < 0 and lo <= 0:
        raise DivergenceError("integrand not integrable at 0")
    return (hi**p - lo**p) / p


def curvature_integral(rk: PiecewisePoly, s: float, k: int, eta_: float) -> float:
    """(1/eta) * integral over (0, 1] of eps^(s-k-1) R_k(eps), in closed form."""
    if eta_ <= 0:
        raise ValueError("eta must be positive")
    total = 0.0
    for lo, hi, cs in rk.pieces():
        lo, hi = max(lo, 0.0), min(hi, 1.0)
        if hi <= lo:
            continue
        for j, c in enumerate(cs):
            if c != 0:
                total += c * _monomial_integral(s - k + j, lo, hi)
    return total / eta_


def rescale_curvature(c: float, lam: float, s: float) -> float:
    """Curvature of lam * F from that of F: c * lam^s."""
    if lam <= 0:
        raise ValueError("scale factor must be positive")
    return c * lam**s


# ---------------------------------------------------------------- the triangle


TRIANGLE_RATIOS = (25 / 41, 20 / 41, 16 / 41)
TRIANGLE_INRADIUS = 4 / 41
TRIANGLE_AREA = 0.24
TRIANGLE_PERIMETER = 2.4


def scaling_functions_triangle():
    """Curvature scaling functions R_0, R_1, R_2 of the right triangle with sides 0.6, 0.8, 1.

    Returns ``(r0, r1, r2, s, ratios)``.  The five pieces lie on
    (0, w], (w, r3], (r3, r2], (r2, r1], (r1, 1] with w the inradius.
    """
    r1, r2, r3 = TRIANGLE_RATIOS
    w = TRIANGLE_INRADIUS
    a, p = TRIANGLE_AREA, TRIANGLE_PERIMETER
    pi = math.pi
    bps = (0.0, w, r3, r2, r1, 1.0)
    big = 6 + 2 * pi
    R0 = PiecewisePoly(bps, ((-3,), (-2,), (-1,), (0,), (1,)))
    R1 = PiecewisePoly(
        bps,
        (
            (0, -big),
            ((1 - r1 - r2 - r3) * p / 2, -2 * pi),
            ((1 - r1 - r2) * p / 2, -pi),
            ((1 - r1) * p / 2,),
            (p / 2, pi),
        ),
    )
    R2 = PiecewisePoly(
        bps,
        (
            (0, 0, -big),
            ((1 - r1**2 - r2**2 - r3**2) * a, (1 - r1 - r2 - r3) * p, -2 * pi),
            ((1 - r1**2 - r2**2) * a, (1 - r1 - r2) * p, -pi),
            ((1 - r1**2) * a, (1 - r1) * p),
            (a, p, pi),
        ),
    )
    s = similarity_dimension(TRIANGLE_RATIOS)
    return R0, R1, R2, s, TRIANGLE_RATIOS


# ---------------------------------------------------------------- fixtures


@dataclass(frozen=True)
class TheoreticalCurvatures:
    s: float
    eta: float
    x: tuple[float, float, float]
    name: str = ""

    @property
    def xi0(self) -> float:
        return self.x[0] / self.x[2]

    @property
    def xi1(self) -> float:
        return self.x[1] / self.x[2]

    def rescaled(self, lam: float) -> tuple[float, float, float]:
        return tuple(rescale_curvature(c, lam, self.s) for c in self.x)


def curvatures_from_scaling(rk, ratios, name: str = "") -> TheoreticalCurvatures:
    s = similarity_dimension(ratios)
    e = eta(ratios, s)
    x = tuple(curvature_integral(rk[k], s, k, e) for k in range(3))
    return TheoreticalCurvatures(s, e, x, name)


def triangle_curvatures() -> TheoreticalCurvatures:
    R0, R1, R2, _, ratios = scaling_functions_triangle()
    return curvatures_from_scaling((R0, R1, R2), ratios, "triangle")


# published constants; reference edge length 1
_FIXTURES = {
    "gasket": ((0.5,) * 3, (-0.042345, 0.37615, 1.81)),
    "carpet": ((1 / 3,) * 8, (-0.0162, 0.0725, 1.352)),
    "modcarpet": ((1 / 3,) * 8, (-0.014, 0.0720, 1.344)),
    "triangle": (TRIANGLE_RATIOS, (-0.023459108, 0.239312913, 1.162171558)),
    "window": ((1 / 7,) * 40, (-0.0146171712902, 0.0652764265706, 1.251813666054)),
    "gate": ((1 / 7,) * 40, (-0.0163916537451, 0.0732007965716, 1.403780236274)),
}


def reference_names() -> list[str]:
    return list(_FIXTURES)


def reference_curvatures(set_id) -> TheoreticalCurvatures:
    """Published curvature constants for a sample set (verbatim fixture)."""
    key = set_id.value if isinstance(set_id, SampleSetId) else str(set_id)
    if key not in _FIXTURES:
        raise NotAvailableError(f"no reference curvatures for {key!r}; available: {', '.join(_FIXTURES)}")
    ratios, x = _FIXTURES[key]
    s = similarity_dimension(ratios)
    return TheoreticalCurvatures(s, eta(ratios, s), x, key)


# ---------------------------------------------------------------- CSV


def scaling_function_from_csv(text: str) -> PiecewisePoly:
    """Rows ``b_lo,b_hi,c0,c1,c2`` (an optional header line is skipped)."""
    pieces = []
    for n, ln in enumerate(text.splitlines(), start=1):
        ln = ln.strip()
        if not ln or ln.startswith("#") or ln.startswith("b_lo"):
            continue
        cells = [c.strip() for c in ln.split(",")]
        if len(cells) < 3:
            raise ValueError(f"line {n}: expected b_lo,b_hi,c0[,c1[,c2]]")
        try:
            vals = [float(c) if c else 0.0 for c in cells]
        except ValueError:
            raise ValueError(f"line {n}: non-numeric cell") from None
        pieces.append((vals[0], vals[1], vals[2:]))
    if not pieces:
        raise ValueError("no pieces")
    return PiecewisePoly.from_pieces(pieces)


def scaling_function_to_csv(rk: PiecewisePoly) -> str:
    buf = io.StringIO()
    buf.write("b_lo,b_hi,c0,c1,c2\n")
    for lo, hi, cs in rk.pieces():
        cs = list(cs) + [0.0] * (3 - len(cs))
        buf.write(",".join(f"{v:.17g}" for v in (lo, hi, *cs)) + "\n")
    return buf.getvalue()
