"""Training algorithms: SGD, SMD, RMD, and the weight-decay baseline.

The RMD update maintains, besides the weights w, one auxiliary scalar
z[i] per training sample. Each visit to sample i computes the residual
r = sqrt(2 L_i(w)) of the constraint z[i] = r and the scalar

    c = eta * (z[i] - r)

then shifts the mirror image of w by (c / r) * grad L_i and moves z[i]
by -c / lambda. Larger lambda weakens the z dynamics; in the limit the
update is exactly stochastic mirror descent. The mini-batch variant
replaces the per-sample quantities by batch means.

Division by r is guarded by ``epsilon_guard``: with square loss an
interpolated sample has a vanishing gradient as well, so the w-update
degenerates gracefully and only z can move.
"""

import dataclasses
import math

import numpy as np

from .data import accuracy
from .errors import EmptyBatchError, NonFiniteError

ALGORITHMS = ("sgd", "smd", "rmd", "wd")


@dataclasses.dataclass
class HyperParams:
    eta: float
    lam: float = 1.0
    batch_size: int = 1
    epsilon_guard: float = 1e-12

    def __post_init__(self):
        if self.eta <= 0 or self.lam <= 0 or self.batch_size < 1 or self.epsilon_guard <= 0:
            raise ValueError(f"hyperparameters must be positive: {self}")


@dataclasses.dataclass
class OptimizerState:
    w: np.ndarray
    z: np.ndarray
    step: int = 0
    epoch: int = 0
    residual_history: list = dataclasses.field(default_factory=list)


def sgd_step(state, model, ds, i, hp):
    """w <- w - eta * grad L_i(w)."""
    _, g = model.loss_and_grad(state.w, ds.X[i], ds.Y[i])
    state.w -= hp.eta * g
    state.step += 1


def weight_decay_step(state, model, ds, i, hp):
    """SGD on the per-sample view of lambda * sum_i L_i + 1/2 ||w||^2.

    Scaling so the loss term keeps unit weight gives a per-sample decay
    coefficient of 1 / (lambda * n).
    """
    _, g = model.loss_and_grad(state.w, ds.X[i], ds.Y[i])
    state.w -= hp.eta * (g + state.w / (hp.lam * ds.n))
    state.step += 1


def smd_step(state, model, potential, ds, i, hp):
    """grad psi(w) <- grad psi(w) - eta * grad L_i(w), then invert."""
    _, g = model.loss_and_grad(state.w, ds.X[i], ds.Y[i])
    potential.step(state.w, g, -hp.eta)
    state.step += 1


def rmd_step(state, model, potential, ds, i, hp):
    rmd_minibatch_step(state, model, potential, ds, [i], hp)


def rmd_minibatch_step(state, model, potential, ds, indices, hp):
    """One mini-batch RMD update; batch size 1 recovers the per-sample rule."""
    indices = np.asarray(indices, dtype=int)
    if indices.size == 0:
        raise EmptyBatchError("RMD mini-batch update needs at least one sample")
    loss, g = model.batch_loss_and_grad(state.w, ds.X[indices], ds.Y[indices])
    z_bar = float(state.z[indices].mean())
    r = math.sqrt(2.0 * loss)
    c = hp.eta * (z_bar - r)
    potential.step(state.w, g, c / max(r, hp.epsilon_guard))
    state.z[indices] -= c / hp.lam
    state.step += 1


def constraint_residual(state, model, ds):
    """Sum_i |z[i] - sqrt(2 L_i(w))|, the RMD stopping statistic."""
    losses = model.sample_losses(state.w, ds.X, ds.Y)
    return float(np.sum(np.abs(state.z - np.sqrt(2.0 * losses))))


@dataclasses.dataclass
class RunResult:
    state: OptimizerState
    w_init: np.ndarray
    stop_reason: str
    metrics: list


def _window_converged(history, window, tol):
    """Relative improvement over the trailing window fell below tol."""
    if len(history) <= window:
        return False
    base = history[-window - 1]
    return base > 0.0 and (base - history[-1]) / base < tol


def run(model, train, algorithm, potential, hp, rng, *, epochs,
        anchor=None, w0=None, init_scale=0.01, z_random=False,
        stop_window=500, stop_tol=1e-4, interp_tol=1e-8, test=None):
    """Train on ``train`` for up to ``epochs`` shuffled full passes.

    Initialization: exactly at ``anchor`` when given, else at ``w0``,
    else Gaussian near zero with standard deviation ``init_scale``.
    The auxiliary z starts at zero (or near zero with ``z_random``).

    Stopping: SGD and SMD halt at interpolation (100% train accuracy,
    or max residual below ``interp_tol`` for label-free data); RMD halts
    when the constraint residual improves by less than ``stop_tol``
    relative over ``stop_window`` consecutive epochs; the weight-decay
    baseline applies the same windowed rule to the training loss.
    Returns per-epoch metrics rows and the reason the run ended.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if hp.batch_size > train.n:
        raise ValueError(f"batch size {hp.batch_size} exceeds n = {train.n}")

    if anchor is not None:
        w = np.array(anchor, dtype=float)
    elif w0 is not None:
        w = np.array(w0, dtype=float)
    else:
        w = model.init_weights(rng, init_scale)
    potential.check_domain(w)
    z = (init_scale * rng.standard_normal(train.n) if z_random
         else np.zeros(train.n))
    state = OptimizerState(w=w, z=z)
    w_init = w.copy()

    loss_history = []
    metrics = []
    stop_reason = "budget"
    for epoch in range(1, epochs + 1):
        order = rng.permutation(train.n)
        for start in range(0, train.n, hp.batch_size):
            batch = order[start:start + hp.batch_size]
            if algorithm == "rmd":
                rmd_minibatch_step(state, model, potential, train, batch, hp)
            else:
                loss, g = model.batch_loss_and_grad(state.w, train.X[batch], train.Y[batch])
                if algorithm == "wd":
                    g = g + state.w / (hp.lam * train.n)
                if algorithm == "smd":
                    potential.step(state.w, g, -hp.eta)
                else:
                    state.w -= hp.eta * g
        state.epoch = epoch

        if not np.all(np.isfinite(state.w)):
            raise NonFiniteError(f"non-finite weights at epoch {epoch}")

        losses = model.sample_losses(state.w, train.X, train.Y)
        train_loss = float(losses.mean())
        train_acc = accuracy(model, state.w, train) if train.labels is not None else float("nan")
        test_acc = (accuracy(model, state.w, test)
                    if test is not None and test.labels is not None else float("nan"))
        residual = float("nan")
        if algorithm == "rmd":
            residual = float(np.sum(np.abs(state.z - np.sqrt(2.0 * losses))))
            state.residual_history.append(residual)
        loss_history.append(train_loss)
        metrics.append({
            "epoch": epoch,
            "train_loss": train_loss,
            "train_accuracy": train_acc,
            "test_accuracy": test_acc,
            "constraint_residual": residual,
            "bregman_from_init": potential.bregman(state.w, w_init),
        })

        if algorithm in ("sgd", "smd"):
            if train.labels is not None:
                if train_acc >= 100.0:
                    stop_reason = "interpolated"
                    break
            elif math.sqrt(2.0 * float(losses.max())) < interp_tol:
                stop_reason = "interpolated"
                break
        elif algorithm == "rmd":
            if _window_converged(state.residual_history, stop_window, stop_tol):
                stop_reason = "constraint-converged"
                break
        elif _window_converged(loss_history, stop_window, stop_tol):
            stop_reason = "loss-converged"
            break

    return RunResult(state=state, w_init=w_init, stop_reason=stop_reason, metrics=metrics)
