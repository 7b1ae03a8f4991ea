"""Construct, train, certify and inspect one-hidden-layer ReLU networks.

The package builds networks directly from a target function's derivatives
with a certified sup-error bound, trains small networks with hand-written
gradients, folds arbitrary 1-D networks to a canonical breakpoint form, and
bins trained weights into a second-derivative spectrum.

Submodules are imported lazily so the command-line entry point can pin BLAS
thread counts into the environment before numpy loads.
"""

__version__ = "0.1.0"

_EXPORTS = {
    "relu": "network",
    "Unit": "network",
    "Network": "network",
    "evaluate": "network",
    "Division": "network",
    "uniform_division": "network",
    "DimensionError": "network",
    "TargetFunction": "targets",
    "UnsupportedTargetError": "targets",
    "get_target": "targets",
    "target_names": "targets",
    "make_sin": "targets",
    "make_poly": "targets",
    "make_gauss2": "targets",
    "make_xy": "targets",
    "evaluate_target": "targets",
    "estimate_sup_norms": "targets",
    "ErrorBound": "construct",
    "build_network": "construct",
    "build_bidirectional": "construct",
    "error_bound": "construct",
    "CanonicalNetwork": "canonical",
    "fold_to_canonical": "canonical",
    "breakpoint_ratios": "canonical",
    "EPS_WEIGHT": "canonical",
    "BinSpectrum": "spectrum",
    "SpectrumComparison": "spectrum",
    "extract_spectrum": "spectrum",
    "compare_spectrum": "spectrum",
    "reconstruct_network": "spectrum",
    "dumps_network": "checkpoint",
    "loads_network": "checkpoint",
    "save_checkpoint": "checkpoint",
    "load_checkpoint": "checkpoint",
    "Dataset": "training",
    "TrainConfig": "training",
    "TrainReport": "training",
    "Gradients": "training",
    "sample_dataset": "training",
    "loss_and_gradient": "training",
    "train": "training",
    "ErrorStats": "verify",
    "ConvergenceRow": "verify",
    "HardnessRow": "verify",
    "sup_error": "verify",
    "convergence_sweep": "verify",
    "hardness_sweep": "verify",
    "grid_points": "verify",
    "default_grid_size": "verify",
    "XY_HARDNESS_NOTE": "verify",
    "write_manifest": "manifest",
    "load_manifest": "manifest",
    "sha256_file": "manifest",
}

__all__ = ["__version__"] + sorted(_EXPORTS)


def __getattr__(name):
    try:
        module_name = _EXPORTS[name]
    except KeyError:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}") from None
    import importlib

    module = importlib.import_module(f".{module_name}", __name__)
    value = getattr(module, name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(set(globals()) | set(__all__))
