"""Differentiable predictors with square loss and exact gradients.

Two model families:

* ``LinearModel(d)`` -- scalar prediction x @ w.
* ``MLPModel(widths)`` -- fully-connected tanh network with a linear
  output layer of one or more heads; parameters are kept flattened in a
  single weight vector (weights then bias per layer).

The per-sample loss is L(w) = 1/2 ||y - f(x, w)||^2, summed over output
heads so the residual stays scalar-valued per sample. ``loss_and_grad``
returns the exact gradient (closed form for the linear model,
backpropagation for the MLP).
"""

import numpy as np

from .errors import DimensionMismatchError


class LinearModel:
    n_outputs = 1

    def __init__(self, d):
        self.d = int(d)
        self.n_params = self.d

    def init_weights(self, rng, scale=0.01):
        return scale * rng.standard_normal(self.n_params)

    def predict(self, w, x):
        self._check(w, x)
        return float(x @ w)

    def loss(self, w, x, y):
        r = float(y) - self.predict(w, x)
        return 0.5 * r * r

    def loss_and_grad(self, w, x, y):
        self._check(w, x)
        r = float(y) - float(x @ w)
        return 0.5 * r * r, -r * x

    def loss_grad(self, w, x, y):
        return self.loss_and_grad(w, x, y)[1]

    def batch_predict(self, w, xs):
        return xs @ w

    def batch_loss_and_grad(self, w, xs, ys):
        """Mean loss and mean gradient over a batch (xs: (m,d), ys: (m,))."""
        r = np.asarray(ys, dtype=float).reshape(-1) - xs @ w
        m = len(r)
        return 0.5 * float(r @ r) / m, -(xs.T @ r) / m

    def sample_losses(self, w, xs, ys):
        r = np.asarray(ys, dtype=float).reshape(-1) - xs @ w
        return 0.5 * r * r

    def _check(self, w, x):
        if w.shape != (self.d,) or x.shape != (self.d,):
            raise DimensionMismatchError(
                f"linear model of dimension {self.d} got w{w.shape}, x{x.shape}")


class MLPModel:
    """Tanh multilayer perceptron, widths = (d, h1, ..., k heads)."""

    def __init__(self, widths):
        widths = tuple(int(v) for v in widths)
        if len(widths) < 2 or any(v < 1 for v in widths):
            raise ValueError(f"need at least input and output widths >= 1, got {widths}")
        self.widths = widths
        self.d = widths[0]
        self.n_outputs = widths[-1]
        self._shapes = [(widths[i], widths[i + 1]) for i in range(len(widths) - 1)]
        self.n_params = sum((fan_in + 1) * fan_out for fan_in, fan_out in self._shapes)

    def init_weights(self, rng, scale=0.01):
        return scale * rng.standard_normal(self.n_params)

    def _layers(self, w):
        if w.shape != (self.n_params,):
            raise DimensionMismatchError(
                f"MLP{self.widths} expects {self.n_params} parameters, got {w.shape}")
        layers = []
        pos = 0
        for fan_in, fan_out in self._shapes:
            mat = w[pos:pos + fan_in * fan_out].reshape(fan_in, fan_out)
            pos += fan_in * fan_out
            bias = w[pos:pos + fan_out]
            pos += fan_out
            layers.append((mat, bias))
        return layers

    def _forward(self, w, xs):
        """Forward pass over a batch; returns hidden activations + outputs."""
        layers = self._layers(w)
        hidden = [xs]
        h = xs
        for mat, bias in layers[:-1]:
            h = np.tanh(h @ mat + bias)
            hidden.append(h)
        mat, bias = layers[-1]
        return hidden, h @ mat + bias

    def predict(self, w, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise DimensionMismatchError(f"MLP input dimension {self.d}, got x{x.shape}")
        _, out = self._forward(w, x[None, :])
        out = out[0]
        return float(out[0]) if self.n_outputs == 1 else out

    def batch_predict(self, w, xs):
        _, out = self._forward(w, xs)
        return out[:, 0] if self.n_outputs == 1 else out

    def loss(self, w, x, y):
        r = np.atleast_1d(np.asarray(y, dtype=float)) - np.atleast_1d(self.predict(w, x))
        return 0.5 * float(r @ r)

    def loss_and_grad(self, w, x, y):
        x = np.asarray(x, dtype=float)
        loss, grad = self.batch_loss_and_grad(w, x[None, :], np.atleast_1d(y)[None, :])
        return loss, grad

    def loss_grad(self, w, x, y):
        return self.loss_and_grad(w, x, y)[1]

    def batch_loss_and_grad(self, w, xs, ys):
        """Mean loss and mean gradient over a batch via backpropagation.

        xs: (m, d); ys: (m, k) targets (or (m,) when k == 1).
        """
        ys = np.asarray(ys, dtype=float)
        if ys.ndim == 1:
            ys = ys[:, None]
        hidden, out = self._forward(w, xs)
        resid = out - ys
        m = xs.shape[0]
        loss = 0.5 * float(np.sum(resid * resid)) / m

        grad = np.empty(self.n_params)
        layers = self._layers(w)
        delta = resid / m
        pos = self.n_params
        for idx in range(len(layers) - 1, -1, -1):
            mat, _ = layers[idx]
            h = hidden[idx]
            fan_in, fan_out = self._shapes[idx]
            pos -= fan_out
            grad[pos:pos + fan_out] = delta.sum(axis=0)
            pos -= fan_in * fan_out
            grad[pos:pos + fan_in * fan_out] = (h.T @ delta).ravel()
            if idx > 0:
                delta = (delta @ mat.T) * (1.0 - h * h)
        return loss, grad

    def sample_losses(self, w, xs, ys):
        ys = np.asarray(ys, dtype=float)
        if ys.ndim == 1:
            ys = ys[:, None]
        _, out = self._forward(w, xs)
        resid = out - ys
        return 0.5 * np.sum(resid * resid, axis=1)
