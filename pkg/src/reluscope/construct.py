"""Direct construction of ReLU networks from a target's derivatives.

Given breakpoints ``0 = xi_0 < ... < xi_J = L``, the forward construction

    F(x) = f(0) + f'(0) relu(x) + sum_j f''(xi_j) (xi_{j+1} - xi_j) relu(x - xi_j)

is a left-endpoint quadrature of the second-derivative integral form of f.
Its sup error on [0, L] is at most ``C1 * |mesh|`` with
``C1 = L^2 ||f'''|| + (L/2) ||f''||``.  The bidirectional variant splits the
curvature mass between forward kinks ``relu(x - xi)`` and backward kinks
``relu(xi - x)`` with a weight ``lam`` in [0, 1]; ``lam = 1`` reduces to the
forward construction.
"""

from dataclasses import dataclass

import numpy as np

from .network import Division, DimensionError, Network, Unit
from .targets import TargetFunction, UnsupportedTargetError, estimate_sup_norms


@dataclass(frozen=True)
class ErrorBound:
    """Certified sup-error bound ``c1 * mesh_norm`` for a constructed network."""

    c1: float
    mesh_norm: float
    bound: float
    estimated_norms: bool

    def __post_init__(self):
        if self.c1 < 0.0 or self.mesh_norm < 0.0 or self.bound < 0.0:
            raise ValueError("bound fields must be non-negative")


def _require_constructible(target: TargetFunction, division: Division):
    if target.input_dim != 1:
        raise DimensionError("construction needs a one-dimensional target")
    if not target.has_derivatives:
        raise UnsupportedTargetError(
            f"target {target.name!r} has no f'/f'' evaluators; cannot construct"
        )
    L = target.domain_length
    if abs(division.length - L) > 1e-9 * max(1.0, L):
        raise ValueError(
            f"division spans [0, {division.length}] but the target domain is [0, {L}]"
        )


def build_network(target: TargetFunction, division: Division, prune: bool = False) -> Network:
    """Forward construction: slope unit at 0 plus one curvature unit per interval.

    Curvature weights sample f'' at left endpoints.  Zero-weight units are kept
    so the unit count is always J + 1; ``prune`` drops units with |b| < 1e-15.
    """
    _require_constructible(target, division)
    pts = division.points
    f0 = float(target.f(0.0))
    slope0 = float(target.f1(0.0))
    curv = np.asarray(target.f2(pts[:-1]), dtype=float)
    widths = np.diff(pts)
    units = [Unit((1.0,), 0.0, slope0)]
    for j in range(division.n_intervals):
        units.append(Unit((1.0,), float(pts[j]), float(curv[j] * widths[j])))
    if prune:
        units = [u for u in units if abs(u.weight_out) >= 1e-15]
    return Network(input_dim=1, units=tuple(units), output_bias=f0)


def build_bidirectional(target: TargetFunction, division: Division, lam: float,
                        prune: bool = False) -> Network:
    """Split construction with curvature weight ``lam`` forward, ``1 - lam`` backward.

    Forward units sample f'' at left interval endpoints; backward units sample
    at right endpoints and are encoded as ``(a=-1, xi=-t)`` so each computes
    ``relu(t - x)``.  The affine part keeps the backward slope weight at zero:
    the forward slope becomes ``f'(0) + (1 - lam) (f'(L) - f'(0))`` and the
    output bias ``f(0) - (1 - lam) * Q`` with Q the trapezoid approximation of
    the first moment of f'' over [0, L].  A factor of exactly zero drops the
    corresponding unit family, so ``lam = 1`` matches :func:`build_network`
    unit for unit.
    """
    lam = float(lam)
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"lam must lie in [0, 1], got {lam}")
    _require_constructible(target, division)
    pts = division.points
    L = division.length
    widths = np.diff(pts)
    f0 = float(target.f(0.0))
    d0 = float(target.f1(0.0))
    dL = float(target.f1(L))
    curv = np.asarray(target.f2(pts), dtype=float)

    moment = float(np.trapezoid(curv * pts, pts))
    bias = f0 - (1.0 - lam) * moment
    slope = d0 + (1.0 - lam) * (dL - d0)

    units = [Unit((1.0,), 0.0, slope)]
    if lam != 0.0:
        for j in range(division.n_intervals):
            units.append(Unit((1.0,), float(pts[j]), float(lam * curv[j] * widths[j])))
    if lam != 1.0:
        for j in range(division.n_intervals):
            weight = (1.0 - lam) * curv[j + 1] * widths[j]
            units.append(Unit((-1.0,), float(-pts[j + 1]), float(weight)))
    if prune:
        units = [u for u in units if abs(u.weight_out) >= 1e-15]
    return Network(input_dim=1, units=tuple(units), output_bias=bias)


def error_bound(target: TargetFunction, division: Division) -> ErrorBound:
    """Certified bound ``(L^2 ||f'''|| + (L/2) ||f''||) * |mesh|``.

    Uses the target's analytic sup norms when present, otherwise falls back to
    dense-grid estimates and marks the result accordingly.
    """
    if target.input_dim != 1:
        raise DimensionError("error bound applies to one-dimensional targets")
    estimated = not target.has_analytic_norms
    if estimated:
        sup2, sup3 = estimate_sup_norms(target)
    else:
        sup2, sup3 = target.sup_f2, target.sup_f3
    L = target.domain_length
    c1 = L ** 2 * sup3 + (L / 2.0) * sup2
    return ErrorBound(
        c1=c1,
        mesh_norm=division.mesh_norm,
        bound=c1 * division.mesh_norm,
        estimated_norms=estimated,
    )
