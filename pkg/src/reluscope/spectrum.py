"""Binned second-derivative spectrum of a one-dimensional ReLU network.

Each non-degenerate unit carries signed mass ``b|a|`` at its kink location
``t = xi/a``.  Binning that mass by location and input-weight orientation
over a grid of width ``h`` gives densities ``B_k^+`` and ``B_k^-`` whose sum
tracks the second derivative of whatever function the network realizes.
This turns trained weights into a directly inspectable curvature estimate.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .canonical import EPS_WEIGHT
from .network import DimensionError, Network, Unit
from .targets import TargetFunction, UnsupportedTargetError


@dataclass(frozen=True)
class BinSpectrum:
    """Signed kink-mass densities per bin and orientation.

    ``b_plus[k]`` collects ``b|a|/h`` over units with positive input weight
    whose breakpoint falls in bin k; ``b_minus`` the same for negative input
    weight.  Mass of units kinking outside [0, L] is summed unsigned in
    ``out_of_range_mass``; flat units are only counted.
    """

    h: float
    K: int
    L: float
    b_plus: np.ndarray
    b_minus: np.ndarray
    out_of_range_mass: float
    degenerate_count: int

    def __post_init__(self):
        for name in ("b_plus", "b_minus"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.K,):
                raise ValueError(f"{name} must have length K={self.K}")
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if abs(self.K * self.h - self.L) > 1e-9:
            raise ValueError("bin grid must tile [0, L]: K*h != L")

    @property
    def bin_edges(self) -> np.ndarray:
        return self.h * np.arange(self.K + 1)

    @property
    def bin_lefts(self) -> np.ndarray:
        return self.h * np.arange(self.K)


def extract_spectrum(net: Network, h: float, L: float) -> BinSpectrum:
    """Bin the kink mass of ``net`` into a spectrum with bin width ``h``.

    ``h`` must tile [0, L] to within 1e-9.  Bins are half-open [kh, (k+1)h)
    with the last bin closed at L; breakpoint/edge coincidences within 1e-9
    of an edge snap to the right bin so constructed meshes land exactly.
    """
    if net.input_dim != 1:
        raise DimensionError("spectrum extraction is defined for 1-D networks only")
    h = float(h)
    L = float(L)
    if not (L > 0.0) or not (0.0 < h <= L):
        raise ValueError(f"need 0 < h <= L, got h={h}, L={L}")
    K = int(round(L / h))
    if K < 1 or abs(K * h - L) > 1e-9:
        raise ValueError(f"bin width {h} does not tile [0, {L}]")
    b_plus = np.zeros(K)
    b_minus = np.zeros(K)
    out_mass = 0.0
    degenerate = 0
    for unit in net.units:
        a = unit.weights_in[0]
        if abs(a) <= EPS_WEIGHT:
            degenerate += 1
            continue
        t = unit.bias / a
        if not (0.0 <= t <= L):
            out_mass += abs(unit.weight_out * a)
            continue
        k = int(np.floor(t / h + 1e-9))
        if k < 0:
            k = 0
        elif k >= K:
            k = K - 1
        mass = unit.weight_out * abs(a) / h
        if a > 0.0:
            b_plus[k] += mass
        else:
            b_minus[k] += mass
    return BinSpectrum(
        h=h,
        K=K,
        L=L,
        b_plus=b_plus,
        b_minus=b_minus,
        out_of_range_mass=out_mass,
        degenerate_count=degenerate,
    )


@dataclass(frozen=True)
class SpectrumComparison:
    """Per-bin spectrum-vs-curvature table with summary statistics.

    Rows cover every bin at its left edge ``t = kh``; ``total`` is
    ``b_plus + b_minus`` and ``residual = total - theory``.  The summary RMS
    and Pearson correlation are computed over the used bins only: when
    ``include_bin0`` is false, bin 0 is excluded because an affine slope unit
    kinking at 0 inflates it without saying anything about curvature.
    ``correlation`` is None when either column is constant.
    """

    t: np.ndarray
    b_plus: np.ndarray
    b_minus: np.ndarray
    total: np.ndarray
    theory: np.ndarray
    residual: np.ndarray
    rms: float
    correlation: Optional[float]
    include_bin0: bool

    @property
    def n_bins(self) -> int:
        return self.t.size


def compare_spectrum(spec: BinSpectrum, target: TargetFunction,
                     include_bin0: bool = True) -> SpectrumComparison:
    """Compare ``b_plus + b_minus`` against the target's second derivative."""
    if target.f2 is None:
        raise UnsupportedTargetError(
            f"target {target.name!r} has no second derivative to compare against"
        )
    t = spec.bin_lefts
    total = spec.b_plus + spec.b_minus
    theory = np.asarray(target.f2(t), dtype=float).ravel()
    residual = total - theory
    used = slice(None) if include_bin0 else slice(1, None)
    res_used = residual[used]
    rms = float(np.sqrt(np.mean(res_used ** 2))) if res_used.size else 0.0
    a = total[used]
    b = theory[used]
    correlation = None
    if a.size >= 2 and np.std(a) > 0.0 and np.std(b) > 0.0:
        correlation = float(np.corrcoef(a, b)[0, 1])
    return SpectrumComparison(
        t=t,
        b_plus=spec.b_plus.copy(),
        b_minus=spec.b_minus.copy(),
        total=total,
        theory=theory,
        residual=residual,
        rms=rms,
        correlation=correlation,
        include_bin0=bool(include_bin0),
    )


def reconstruct_network(spec: BinSpectrum, output_bias: float = 0.0) -> Network:
    """Rebuild a network from a spectrum: one unit per nonzero bin and side.

    Forward bins become units ``(a=1, xi=kh, b=B_k^+ h)``; backward bins
    become ``(a=-1, xi=-kh, b=B_k^- h)``.  With the source network's output
    bias this approximates the source to within the bin width's resolution.
    """
    units = []
    lefts = spec.bin_lefts
    for k in range(spec.K):
        if spec.b_plus[k] != 0.0:
            units.append(Unit((1.0,), float(lefts[k]), float(spec.b_plus[k] * spec.h)))
    for k in range(spec.K):
        if spec.b_minus[k] != 0.0:
            units.append(Unit((-1.0,), float(-lefts[k]), float(spec.b_minus[k] * spec.h)))
    return Network(input_dim=1, units=tuple(units), output_bias=float(output_bias))
