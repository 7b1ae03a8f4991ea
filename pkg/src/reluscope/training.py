"""Mini-batch gradient-descent training with explicit, framework-free gradients.

The loss is plain mean squared error.  Gradients are written out by hand from
the chain rule; the rectifier's derivative at exactly zero is defined as 0,
so every formula below is exact and checkable against finite differences.
Training is deterministic given the dataset and config: a single seeded
generator drives initialization and batch shuffling in a fixed order, and all
reductions run in a fixed order when BLAS is pinned to one thread.
"""

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .network import Network
from .targets import evaluate_target, get_target
from .verify import default_grid_size, sup_error

INIT_SCHEMES = ("domain-kinks",)
OPTIMIZERS = ("adam", "sgd")


@dataclass(frozen=True)
class Dataset:
    """Seeded, noise-free (x, f(x)) samples from a registry target."""

    input_dim: int
    xs: np.ndarray
    ys: np.ndarray
    seed: int
    source: dict

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float).ravel()
        if xs.ndim != 2 or xs.shape[1] != self.input_dim:
            raise ValueError(f"xs must have shape (n, {self.input_dim})")
        if ys.shape[0] != xs.shape[0]:
            raise ValueError("xs and ys disagree on sample count")
        xs = xs.copy()
        ys = ys.copy()
        xs.flags.writeable = False
        ys.flags.writeable = False
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    @property
    def pairs(self):
        """The samples as (point tuple, value) pairs, in draw order."""
        return [(tuple(x), float(y)) for x, y in zip(self.xs, self.ys)]


def sample_dataset(name: str, params: dict, n: int, seed: int) -> Dataset:
    """Draw n points uniformly on [0, L]^m and label them with exact f values."""
    if n < 1:
        raise ValueError("need at least one sample")
    target = get_target(name, **dict(params))
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, target.domain_length, size=(n, target.input_dim))
    ys = evaluate_target(target, xs)
    return Dataset(input_dim=target.input_dim, xs=xs, ys=ys, seed=int(seed),
                   source={"name": name, "params": dict(params)})


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for one training run.

    ``eval_grid_size`` 0 means pick the dimension's default grid at
    evaluation time.  The only initialization scheme, ``domain-kinks``, draws
    input weights uniformly from {-1, +1} per component and places each
    unit's kink at a uniform point of the domain, so the network starts with
    breakpoints covering where the data lives.
    """

    units: int
    epochs: int = 200
    batch_size: int = 64
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    init_scheme: str = "domain-kinks"
    seed: int = 0
    eval_grid_size: int = 0

    def __post_init__(self):
        if self.units < 1 or self.epochs < 1 or self.batch_size < 1:
            raise ValueError("units, epochs and batch_size must be positive")
        if not (self.learning_rate > 0.0):
            raise ValueError("learning_rate must be positive")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if self.init_scheme not in INIT_SCHEMES:
            raise ValueError(f"init_scheme must be one of {INIT_SCHEMES}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("adam betas must lie in [0, 1)")
        if self.eval_grid_size < 0:
            raise ValueError("eval_grid_size must be 0 (auto) or >= 2")


@dataclass(frozen=True)
class Gradients:
    """Exact MSE gradient for every parameter group of a network."""

    in_weights: np.ndarray
    in_biases: np.ndarray
    out_weights: np.ndarray
    output_bias: float


def _mse_and_grad(A, xi, b, bias, X, y):
    """Batch MSE and its gradient for raw parameter arrays.

    A: (J, m) input weights; xi: (J,) unit biases; b: (J,) output weights;
    bias: scalar output bias; X: (n, m); y: (n,).
    """
    Z = X @ A.T - xi
    H = Z > 0.0
    P = np.where(H, Z, 0.0)
    r = P @ b + bias - y
    n = y.shape[0]
    mse = float(r @ r) / n
    scale = 2.0 / n
    g_bias = scale * float(np.sum(r))
    g_b = scale * (P.T @ r)
    W = np.where(H, r[:, None], 0.0)
    g_xi = -scale * b * np.sum(W, axis=0)
    g_A = scale * b[:, None] * (W.T @ X)
    return mse, g_A, g_xi, g_b, g_bias


def loss_and_gradient(net: Network, xs, ys):
    """MSE of the network on a batch and its exact parameter gradient.

    ``xs`` is (n,) for one input or (n, m); ``ys`` is (n,).  Returns
    ``(mse, Gradients)`` with arrays shaped like the network's parameters.
    """
    X = np.asarray(xs, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(ys, dtype=float).ravel()
    if X.shape[0] == 0:
        raise ValueError("batch must be nonempty")
    if X.shape[1] != net.input_dim:
        raise ValueError(f"batch points have dimension {X.shape[1]}, "
                         f"expected {net.input_dim}")
    mse, g_A, g_xi, g_b, g_bias = _mse_and_grad(
        net.in_weights, net.in_biases, net.out_weights, net.output_bias, X, y)
    return mse, Gradients(in_weights=g_A, in_biases=g_xi,
                          out_weights=g_b, output_bias=g_bias)


@dataclass(frozen=True)
class TrainReport:
    """Outcome of one training run.

    ``network`` is None when the run diverged so badly the final parameters
    are not even finite; ``diverged`` runs carry infinite eval errors.
    """

    network: Optional[Network]
    loss_curve: tuple
    max_error: float
    mse: float
    seconds: float
    diverged: bool = False


def _init_params(rng, J, m, L):
    signs = rng.integers(0, 2, size=(J, m)).astype(float) * 2.0 - 1.0
    kinks = rng.uniform(0.0, L, size=(J, m))
    A = signs
    xi = np.sum(A * kinks, axis=1)
    scale = 1.0 / math.sqrt(J)
    b = rng.uniform(-scale, scale, size=J)
    return A, xi, b, 0.0


def train(data: Dataset, cfg: TrainConfig) -> TrainReport:
    """Fit a fresh network to the dataset by mini-batch gradient descent."""
    t0 = time.perf_counter()
    target = get_target(data.source["name"], **data.source["params"])
    rng = np.random.default_rng(cfg.seed)
    A, xi, b, bias = _init_params(rng, cfg.units, data.input_dim,
                                  target.domain_length)
    bias = np.float64(bias)
    params = [A, xi, b]
    adam = cfg.optimizer == "adam"
    if adam:
        m1 = [np.zeros_like(p) for p in params] + [np.float64(0.0)]
        m2 = [np.zeros_like(p) for p in params] + [np.float64(0.0)]
    step = 0
    loss_curve = []
    diverged = False
    for _ in range(cfg.epochs):
        order = rng.permutation(data.n)
        epoch_losses = []
        for start in range(0, data.n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            mse, g_A, g_xi, g_b, g_bias = _mse_and_grad(
                A, xi, b, bias, data.xs[idx], data.ys[idx])
            if not math.isfinite(mse):
                diverged = True
                break
            epoch_losses.append(mse)
            grads = [g_A, g_xi, g_b, g_bias]
            step += 1
            if adam:
                c1 = 1.0 - cfg.beta1 ** step
                c2 = 1.0 - cfg.beta2 ** step
                new_bias = bias
                for slot, grad in enumerate(grads):
                    m1[slot] = cfg.beta1 * m1[slot] + (1.0 - cfg.beta1) * grad
                    m2[slot] = cfg.beta2 * m2[slot] + (1.0 - cfg.beta2) * (grad * grad)
                    delta = cfg.learning_rate * (m1[slot] / c1) / (
                        np.sqrt(m2[slot] / c2) + cfg.eps)
                    if slot < 3:
                        params[slot] -= delta
                    else:
                        new_bias = bias - delta
                bias = new_bias
            else:
                A -= cfg.learning_rate * g_A
                xi -= cfg.learning_rate * g_xi
                b -= cfg.learning_rate * g_b
                bias = bias - cfg.learning_rate * g_bias
        if epoch_losses:
            loss_curve.append(float(np.mean(epoch_losses)))
        if diverged:
            break
    seconds = time.perf_counter() - t0
    if diverged:
        try:
            network = Network.from_arrays(A, xi, b, float(bias))
        except ValueError:
            network = None
        return TrainReport(network=network, loss_curve=tuple(loss_curve),
                           max_error=float("inf"), mse=float("inf"),
                           seconds=seconds, diverged=True)
    network = Network.from_arrays(A, xi, b, float(bias))
    grid = cfg.eval_grid_size or default_grid_size(data.input_dim)
    stats = sup_error(target, network, grid)
    seconds = time.perf_counter() - t0
    return TrainReport(network=network, loss_curve=tuple(loss_curve),
                       max_error=stats.max_error, mse=stats.mse,
                       seconds=seconds, diverged=False)
