"""Flat one-hidden-layer ReLU networks and breakpoint meshes.

A network is an ordered collection of hidden units ``(a_j, xi_j, b_j)`` with a
single output bias; its value at ``x`` is ``bias + sum_j b_j * relu(<a_j, x> - xi_j)``.
All value types here are immutable after construction and safe to share.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class DimensionError(ValueError):
    """Input dimension does not match what the operation supports."""


def relu(x: float) -> float:
    """Rectifier max(x, 0)."""
    return x if x > 0.0 else 0.0


def _check_finite(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Unit:
    """One hidden unit: input weights, unit bias and output weight.

    ``weights_in`` has one entry per input coordinate; ``bias`` shifts the
    pre-activation and ``weight_out`` scales the rectified output.
    """

    weights_in: tuple
    bias: float
    weight_out: float

    def __post_init__(self):
        object.__setattr__(self, "weights_in", tuple(float(w) for w in self.weights_in))
        object.__setattr__(self, "bias", float(self.bias))
        object.__setattr__(self, "weight_out", float(self.weight_out))
        _check_finite("weights_in", self.weights_in)
        _check_finite("bias", self.bias)
        _check_finite("weight_out", self.weight_out)


def _as_point(x, input_dim):
    if np.isscalar(x):
        if input_dim != 1:
            raise DimensionError(f"scalar input given to a network with input_dim={input_dim}")
        return (float(x),)
    vec = tuple(float(v) for v in np.asarray(x, dtype=float).ravel())
    if len(vec) != input_dim:
        raise DimensionError(f"input has length {len(vec)}, expected {input_dim}")
    return vec


@dataclass(frozen=True)
class Network:
    """One-hidden-layer ReLU network with ``input_dim`` inputs.

    Unit order is preserved; scalar evaluation accumulates in that order so
    repeated evaluations are bitwise reproducible.
    """

    input_dim: int
    units: tuple
    output_bias: float

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "output_bias", float(self.output_bias))
        _check_finite("output_bias", self.output_bias)
        for unit in self.units:
            if len(unit.weights_in) != self.input_dim:
                raise DimensionError(
                    f"unit has {len(unit.weights_in)} input weights, expected {self.input_dim}"
                )

    @classmethod
    def from_arrays(cls, in_weights, in_biases, out_weights, output_bias) -> "Network":
        """Build a network from parameter arrays of shapes (J, m), (J,), (J,).

        A 1-D ``in_weights`` array is taken as J units with one input each.
        """
        a = np.asarray(in_weights, dtype=float)
        if a.ndim == 1:
            a = a[:, None]
        xi = np.asarray(in_biases, dtype=float).ravel()
        b = np.asarray(out_weights, dtype=float).ravel()
        if a.shape[0] != xi.shape[0] or xi.shape[0] != b.shape[0]:
            raise ValueError("parameter arrays disagree on unit count")
        units = tuple(
            Unit(tuple(a[j]), float(xi[j]), float(b[j])) for j in range(a.shape[0])
        )
        return cls(input_dim=a.shape[1], units=units, output_bias=float(output_bias))

    @property
    def n_units(self) -> int:
        return len(self.units)

    @cached_property
    def in_weights(self) -> np.ndarray:
        """(J, m) matrix of unit input weights."""
        if not self.units:
            return np.zeros((0, self.input_dim))
        return np.array([u.weights_in for u in self.units], dtype=float)

    @cached_property
    def in_biases(self) -> np.ndarray:
        return np.array([u.bias for u in self.units], dtype=float)

    @cached_property
    def out_weights(self) -> np.ndarray:
        return np.array([u.weight_out for u in self.units], dtype=float)

    def evaluate(self, x) -> float:
        """Value at a single point, accumulated in unit order."""
        point = _as_point(x, self.input_dim)
        total = self.output_bias
        for unit in self.units:
            pre = -unit.bias
            for w, v in zip(unit.weights_in, point):
                pre += w * v
            total += unit.weight_out * relu(pre)
        return total

    def evaluate_many(self, xs) -> np.ndarray:
        """Vectorized values for points ``xs`` of shape (n,) for 1-D or (n, m)."""
        pts = np.asarray(xs, dtype=float)
        if pts.ndim == 1:
            if self.input_dim != 1:
                raise DimensionError("1-D point array given to a multivariable network")
            pts = pts[:, None]
        if pts.shape[1] != self.input_dim:
            raise DimensionError(f"points have dimension {pts.shape[1]}, expected {self.input_dim}")
        if not self.units:
            return np.full(pts.shape[0], self.output_bias)
        out = np.empty(pts.shape[0])
        # chunk rows so the (rows, J) activation matrix stays small
        step = max(1, (1 << 22) // max(1, self.n_units))
        a_t = self.in_weights.T
        for start in range(0, pts.shape[0], step):
            block = pts[start:start + step]
            z = block @ a_t - self.in_biases
            np.maximum(z, 0.0, out=z)
            out[start:start + step] = z @ self.out_weights + self.output_bias
        return out


def evaluate(net: Network, x) -> float:
    """Functional form of :meth:`Network.evaluate`."""
    return net.evaluate(x)


@dataclass(frozen=True, eq=False)
class Division:
    """Sorted breakpoints 0 = xi_0 < ... < xi_J = L with their largest gap."""

    points: np.ndarray
    mesh_norm: float

    @classmethod
    def from_points(cls, points) -> "Division":
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a division needs at least the two endpoints")
        if not np.all(np.isfinite(pts)):
            raise ValueError("division points must be finite")
        if np.any(np.diff(pts) <= 0.0):
            raise ValueError("division points must be strictly increasing")
        if pts[0] != 0.0:
            raise ValueError("division must start at 0")
        if pts[-1] <= 0.0:
            raise ValueError("division must end at L > 0")
        pts = pts.copy()
        pts.flags.writeable = False
        return cls(points=pts, mesh_norm=float(np.max(np.diff(pts))))

    @property
    def n_intervals(self) -> int:
        return self.points.size - 1

    @property
    def length(self) -> float:
        return float(self.points[-1])


def uniform_division(J: int, L: float) -> Division:
    """Equispaced division of [0, L] into J intervals."""
    if J < 1:
        raise ValueError("J must be a positive integer")
    if not (L > 0.0) or not math.isfinite(L):
        raise ValueError("L must be positive and finite")
    pts = L * np.arange(J + 1) / J
    pts[0] = 0.0
    pts[-1] = L
    return Division.from_points(pts)
