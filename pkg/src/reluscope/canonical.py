"""Canonical breakpoint form of one-dimensional ReLU networks.

Restricted to [0, L], every unit ``b * relu(a*x - xi)`` is one of three
things: a forward kink ``b|a| * relu(x - t)`` with breakpoint ``t = xi/a``
inside the interval, a backward kink ``b|a| * relu(t - x)``, or an affine
function.  Folding collects the affine leftovers into a constant plus
coefficients of ``relu(x)`` and ``relu(L - x)``, which makes networks with
wildly different raw parameters directly comparable.
"""

from dataclasses import dataclass

import numpy as np

from .network import DimensionError, Network, Unit, relu

# below this input weight magnitude a unit is flat on any bounded interval
EPS_WEIGHT = 1e-12


@dataclass(frozen=True)
class CanonicalNetwork:
    """Affine part plus forward/backward kinks with breakpoints in [0, L].

    ``forward`` and ``backward`` are tuples of ``(t, coefficient)`` pairs in
    source-unit order; coefficients already include the ``|a|`` rescaling.
    """

    const_term: float
    slope_pos: float
    slope_neg: float
    forward: tuple
    backward: tuple
    L: float

    def __post_init__(self):
        object.__setattr__(self, "const_term", float(self.const_term))
        object.__setattr__(self, "slope_pos", float(self.slope_pos))
        object.__setattr__(self, "slope_neg", float(self.slope_neg))
        object.__setattr__(self, "forward",
                           tuple((float(t), float(c)) for t, c in self.forward))
        object.__setattr__(self, "backward",
                           tuple((float(t), float(c)) for t, c in self.backward))
        object.__setattr__(self, "L", float(self.L))
        if not (self.L > 0.0):
            raise ValueError("L must be positive")
        for t, _ in self.forward + self.backward:
            if not (0.0 <= t <= self.L):
                raise ValueError(f"breakpoint {t} outside [0, {self.L}]")

    @property
    def n_kinks(self) -> int:
        return len(self.forward) + len(self.backward)

    def evaluate(self, x) -> float:
        """Value at a single point, accumulated in stored order."""
        x = float(x)
        total = self.const_term
        total += self.slope_pos * relu(x)
        total += self.slope_neg * relu(self.L - x)
        for t, c in self.forward:
            total += c * relu(x - t)
        for t, c in self.backward:
            total += c * relu(t - x)
        return total

    def evaluate_many(self, xs) -> np.ndarray:
        """Vectorized values on a 1-D array of points."""
        x = np.asarray(xs, dtype=float).ravel()
        out = np.full(x.shape, self.const_term)
        out += self.slope_pos * np.maximum(x, 0.0)
        out += self.slope_neg * np.maximum(self.L - x, 0.0)
        if self.forward:
            ts = np.array([t for t, _ in self.forward])
            cs = np.array([c for _, c in self.forward])
            out += np.maximum(x[:, None] - ts, 0.0) @ cs
        if self.backward:
            ts = np.array([t for t, _ in self.backward])
            cs = np.array([c for _, c in self.backward])
            out += np.maximum(ts - x[:, None], 0.0) @ cs
        return out

    def to_network(self) -> Network:
        """Equivalent flat network: slope units first, then forward, then backward.

        Exactly-zero slope coefficients are omitted; kink entries are kept
        verbatim, so folding the result reproduces this canonical form up to
        the slope units landing at breakpoints 0 and L.
        """
        units = []
        if self.slope_pos != 0.0:
            units.append(Unit((1.0,), 0.0, self.slope_pos))
        if self.slope_neg != 0.0:
            units.append(Unit((-1.0,), -self.L, self.slope_neg))
        for t, c in self.forward:
            units.append(Unit((1.0,), t, c))
        for t, c in self.backward:
            units.append(Unit((-1.0,), -t, c))
        return Network(input_dim=1, units=tuple(units), output_bias=self.const_term)


def fold_to_canonical(net: Network, L: float) -> CanonicalNetwork:
    """Rewrite a 1-D network over [0, L] into canonical breakpoint form.

    Units with breakpoint ``t = xi/a`` in [0, L] (closed; boundary ties count
    as in range) become forward or backward kinks with coefficient ``b|a|``.
    Units whose kink lies outside the interval are affine or zero there and
    fold into the constant and slope terms.  Units with ``|a| <= EPS_WEIGHT``
    contribute the constant ``b * relu(-xi)``.
    """
    if net.input_dim != 1:
        raise DimensionError("canonical form is defined for 1-D networks only")
    L = float(L)
    if not (L > 0.0) or not np.isfinite(L):
        raise ValueError("L must be positive and finite")
    const = net.output_bias
    slope_pos = 0.0
    slope_neg = 0.0
    forward = []
    backward = []
    for unit in net.units:
        a = unit.weights_in[0]
        xi = unit.bias
        b = unit.weight_out
        if abs(a) <= EPS_WEIGHT:
            const += b * relu(-xi)
            continue
        t = xi / a
        mass = b * abs(a)
        if a > 0.0:
            if 0.0 <= t <= L:
                forward.append((t, mass))
            elif t < 0.0:
                # relu(x - t) = relu(x) - t for x >= 0
                const += mass * (-t)
                slope_pos += mass
            # t > L: zero everywhere on [0, L]
        else:
            if 0.0 <= t <= L:
                backward.append((t, mass))
            elif t > L:
                # relu(t - x) = (t - L) + relu(L - x) for x <= L
                const += mass * (t - L)
                slope_neg += mass
            # t < 0: zero everywhere on [0, L]
    return CanonicalNetwork(
        const_term=const,
        slope_pos=slope_pos,
        slope_neg=slope_neg,
        forward=tuple(forward),
        backward=tuple(backward),
        L=L,
    )


def breakpoint_ratios(net: Network):
    """Per-unit kink locations ``(t, sign of a, b*|a|)`` in unit order.

    Units with ``|a| <= EPS_WEIGHT`` have no kink; they are skipped and
    reported through the second return value as a count.
    """
    if net.input_dim != 1:
        raise DimensionError("breakpoint ratios are defined for 1-D networks only")
    entries = []
    degenerate = 0
    for unit in net.units:
        a = unit.weights_in[0]
        if abs(a) <= EPS_WEIGHT:
            degenerate += 1
            continue
        sign = 1 if a > 0.0 else -1
        entries.append((unit.bias / a, sign, unit.weight_out * abs(a)))
    return entries, degenerate
