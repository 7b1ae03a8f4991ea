"""Built-in target functions with analytic derivatives and curvature norms.

Registry names:
    sin     - sin(M*x) on [0, L], params M (frequency) and L
    poly    - polynomial with ascending coefficients on [0, L]
    gauss2  - sum of two isotropic Gaussian bumps on [0, L]^2
    xy      - the product x*y on [0, L]^2

One-dimensional entries carry exact first/second derivative evaluators and
the sup norms of f'' and f''' over [0, L]; those norms feed the certified
error bound, so they are computed analytically, not sampled.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .network import DimensionError


class UnsupportedTargetError(ValueError):
    """Target lacks the evaluators or norms an operation needs."""


@dataclass(frozen=True, eq=False)
class TargetFunction:
    """A target to approximate: evaluators plus domain and curvature data."""

    name: str
    params: dict
    input_dim: int
    domain_length: float
    f: Callable
    f1: Optional[Callable] = None
    f2: Optional[Callable] = None
    sup_f2: Optional[float] = None
    sup_f3: Optional[float] = None

    def __post_init__(self):
        if not (self.domain_length > 0.0) or not math.isfinite(self.domain_length):
            raise ValueError("domain_length must be positive and finite")
        for label, value in (("sup_f2", self.sup_f2), ("sup_f3", self.sup_f3)):
            if value is not None and value < 0.0:
                raise ValueError(f"{label} must be >= 0")

    @property
    def has_derivatives(self) -> bool:
        return self.f1 is not None and self.f2 is not None

    @property
    def has_analytic_norms(self) -> bool:
        return self.sup_f2 is not None and self.sup_f3 is not None


def _max_abs_sin(c: float) -> float:
    """max |sin t| over t in [0, c] for c >= 0."""
    return 1.0 if c >= math.pi / 2.0 else math.sin(c)


def make_sin(M: float = 1.0, L: float = 2.0 * math.pi) -> TargetFunction:
    M = float(M)
    L = float(L)
    if M <= 0.0:
        raise ValueError("sin target needs frequency M > 0")
    return TargetFunction(
        name="sin",
        params={"M": M, "L": L},
        input_dim=1,
        domain_length=L,
        f=lambda x: np.sin(M * np.asarray(x, dtype=float)),
        f1=lambda x: M * np.cos(M * np.asarray(x, dtype=float)),
        f2=lambda x: -(M ** 2) * np.sin(M * np.asarray(x, dtype=float)),
        sup_f2=M ** 2 * _max_abs_sin(M * L),
        sup_f3=M ** 3,
    )


def _poly_sup_abs(coeffs: np.ndarray, L: float) -> float:
    """Exact max |p(x)| over [0, L]: endpoints plus interior critical points."""
    if coeffs.size == 0 or np.all(coeffs == 0.0):
        return 0.0
    candidates = [0.0, L]
    if coeffs.size > 1:
        deriv = npoly.polyder(coeffs)
        if np.any(deriv != 0.0):
            roots = npoly.polyroots(deriv)
            for r in roots:
                if abs(r.imag) < 1e-12 and 0.0 <= r.real <= L:
                    candidates.append(float(r.real))
    return float(max(abs(npoly.polyval(c, coeffs)) for c in candidates))


def make_poly(coeffs, L: float = 1.0) -> TargetFunction:
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("poly target needs a non-empty coefficient list")
    L = float(L)
    c1 = npoly.polyder(c) if c.size > 1 else np.zeros(1)
    c2 = npoly.polyder(c, 2) if c.size > 2 else np.zeros(1)
    c3 = npoly.polyder(c, 3) if c.size > 3 else np.zeros(1)
    return TargetFunction(
        name="poly",
        params={"coeffs": tuple(float(v) for v in c), "L": L},
        input_dim=1,
        domain_length=L,
        f=lambda x: npoly.polyval(np.asarray(x, dtype=float), c),
        f1=lambda x: npoly.polyval(np.asarray(x, dtype=float), c1),
        f2=lambda x: npoly.polyval(np.asarray(x, dtype=float), c2),
        sup_f2=_poly_sup_abs(c2, L),
        sup_f3=_poly_sup_abs(c3, L),
    )


def make_gauss2(a: float = 5.0, x1: float = 3.0, y1: float = 5.0,
                x2: float = 7.0, y2: float = 5.0, L: float = 10.0) -> TargetFunction:
    a = float(a)
    centers = ((float(x1), float(y1)), (float(x2), float(y2)))

    def f(points):
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        total = np.zeros(pts.shape[0])
        for cx, cy in centers:
            total += np.exp(-a * ((pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2))
        return float(total[0]) if single else total

    return TargetFunction(
        name="gauss2",
        params={"a": a, "x1": centers[0][0], "y1": centers[0][1],
                "x2": centers[1][0], "y2": centers[1][1], "L": float(L)},
        input_dim=2,
        domain_length=float(L),
        f=f,
    )


def make_xy(L: float = 1.0) -> TargetFunction:
    def f(points):
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        out = pts[:, 0] * pts[:, 1]
        return float(out[0]) if single else out

    return TargetFunction(
        name="xy",
        params={"L": float(L)},
        input_dim=2,
        domain_length=float(L),
        f=f,
    )


_BUILDERS = {
    "sin": make_sin,
    "poly": make_poly,
    "gauss2": make_gauss2,
    "xy": make_xy,
}


def target_names():
    return sorted(_BUILDERS)


def get_target(name: str, **params) -> TargetFunction:
    """Look up a registry target by name; unknown names raise ``KeyError``."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown target {name!r}; known targets: {', '.join(target_names())}") from None
    return builder(**params)


def evaluate_target(target: TargetFunction, points) -> np.ndarray:
    """Vectorized target values for points of shape (n,) in 1-D or (n, m)."""
    pts = np.asarray(points, dtype=float)
    if target.input_dim == 1:
        if pts.ndim == 2 and pts.shape[1] == 1:
            pts = pts[:, 0]
        if pts.ndim != 1:
            raise DimensionError("one-dimensional target given points of shape "
                                 f"{pts.shape}")
        return np.asarray(target.f(pts), dtype=float).ravel()
    if pts.ndim != 2 or pts.shape[1] != target.input_dim:
        raise DimensionError(
            f"target expects points of shape (n, {target.input_dim}), got {pts.shape}"
        )
    return np.asarray(target.f(pts), dtype=float).ravel()


def estimate_sup_norms(target: TargetFunction, n: int = 4096) -> tuple:
    """Grid estimates of (||f''||, ||f'''||) over [0, L] when no analytic norms exist.

    The second-derivative norm is a dense max of |f''|; the third derivative is
    approximated by central differences of f''. Results are lower bounds up to
    grid resolution and are flagged as estimated wherever they are used.
    """
    if target.input_dim != 1 or target.f2 is None:
        raise UnsupportedTargetError("norm estimation needs a one-dimensional target with f''")
    L = target.domain_length
    xs = np.linspace(0.0, L, n)
    f2_vals = np.asarray(target.f2(xs), dtype=float)
    sup2 = float(np.max(np.abs(f2_vals)))
    step = 1e-5 * L
    interior = xs[(xs - step >= 0.0) & (xs + step <= L)]
    diffs = (np.asarray(target.f2(interior + step), dtype=float)
             - np.asarray(target.f2(interior - step), dtype=float)) / (2.0 * step)
    sup3 = float(np.max(np.abs(diffs))) if diffs.size else 0.0
    return sup2, sup3
