"""Matplotlib renderings of run artifacts, written straight to files.

Every function takes plain arrays plus an output path and returns the path,
so callers can list the figure next to the CSV it visualizes.  The Agg
backend is forced before pyplot loads; nothing here ever opens a window.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def approximation_figure(path, x, f_vals, net_vals):
    """Target vs network overlay with the residual underneath."""
    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(7.0, 5.0), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]})
    ax0.plot(x, f_vals, label="target", lw=1.5)
    ax0.plot(x, net_vals, label="network", lw=1.0, ls="--")
    ax0.set_ylabel("value")
    ax0.legend(loc="best")
    ax1.plot(x, np.asarray(net_vals) - np.asarray(f_vals), lw=0.8, color="tab:red")
    ax1.axhline(0.0, color="black", lw=0.5)
    ax1.set_xlabel("x")
    ax1.set_ylabel("residual")
    return _save(fig, path)


def surface_figure(path, axis, f_grid, net_grid):
    """Side-by-side heat maps of a 2-D target, the fit, and their difference."""
    f_grid = np.asarray(f_grid)
    net_grid = np.asarray(net_grid)
    extent = [axis[0], axis[-1], axis[0], axis[-1]]
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.6))
    shared = dict(origin="lower", extent=extent, aspect="equal")
    for ax, grid, title in zip(axes[:2], (f_grid, net_grid), ("target", "network")):
        im = ax.imshow(grid.T, **shared)
        ax.set_title(title)
        fig.colorbar(im, ax=ax, shrink=0.85)
    im = axes[2].imshow((net_grid - f_grid).T, cmap="RdBu_r", **shared)
    axes[2].set_title("difference")
    fig.colorbar(im, ax=axes[2], shrink=0.85)
    return _save(fig, path)


def loss_figure(path, losses):
    """Per-epoch training loss on a log scale."""
    losses = np.asarray(losses, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.semilogy(np.arange(1, losses.size + 1), losses, lw=1.2)
    ax.set_xlabel("epoch")
    ax.set_ylabel("training MSE")
    return _save(fig, path)


def spectrum_figure(path, t, total, theory, h):
    """Binned kink-mass density against the target's second derivative."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.bar(t, total, width=h, align="edge", alpha=0.6, label="binned mass")
    fine = np.linspace(t[0], t[-1] + h, 512)
    ax.plot(fine, np.interp(fine, t, theory), color="black", lw=1.2,
            label="second derivative")
    ax.set_xlabel("breakpoint t")
    ax.set_ylabel("density")
    ax.legend(loc="best")
    return _save(fig, path)


def breakpoints_figure(path, ts, L):
    """Histogram of kink locations xi/a."""
    ts = np.asarray(ts, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    if ts.size:
        lo = min(0.0, float(np.min(ts)))
        hi = max(L, float(np.max(ts)))
        ax.hist(ts, bins=50, range=(lo, hi), alpha=0.8)
    ax.axvline(0.0, color="black", lw=0.8, ls=":")
    ax.axvline(L, color="black", lw=0.8, ls=":")
    ax.set_xlabel("breakpoint t = xi / a")
    ax.set_ylabel("unit count")
    return _save(fig, path)


def convergence_figure(path, J_values, errors, bounds):
    """Measured sup error and certified bound against unit count, log-log."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(J_values, errors, "o-", label="measured max error")
    ax.loglog(J_values, bounds, "s--", label="certified bound")
    ax.set_xlabel("J")
    ax.set_ylabel("sup error on [0, L]")
    ax.legend(loc="best")
    return _save(fig, path)


def hardness_figure(path, J_values, mses, max_errors):
    """Error floor of the 2-D product fit as capacity grows."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(J_values, mses, "o-", label="eval MSE")
    ax.loglog(J_values, max_errors, "s--", label="eval max error")
    ax.set_xlabel("J")
    ax.set_ylabel("error")
    ax.legend(loc="best")
    return _save(fig, path)
