"""Minimal fully-connected network in numpy, float64 throughout.

Fixed topology: input (52 or 88) -> three hidden layers of 128 ReLU units
-> linear output (36, or 41 with the partner-estimation head).  Training
uses a masked squared-error loss and rmsprop with momentum; gradients are
exact and checked against finite differences in the tests.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

HIDDEN_WIDTHS = (128, 128, 128)
VALID_INPUT_WIDTHS = (52, 88)
VALID_OUTPUT_WIDTHS = (36, 41)

# rmsprop defaults used by every training run
RMSPROP_DECAY = 0.98
RMSPROP_MOMENTUM = 0.82
STEP_RATE = 0.83          # per-epoch multiplicative learning-rate decay
ETA = 0.05                # learning rate
BATCH_SIZE = 50
RMSPROP_EPS = 1e-8

_MAGIC = b"BBN1"


@dataclass
class Mlp:
    """Weights/biases per layer; weights are (fan_in, fan_out) float64."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    @classmethod
    def new(cls, input_width: int, output_width: int, seed: int) -> "Mlp":
        """Fresh network: uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights,
        zero biases, drawn from a PCG64 generator seeded with ``seed``."""
        if input_width not in VALID_INPUT_WIDTHS:
            raise ValueError(f"input width must be one of {VALID_INPUT_WIDTHS}")
        if output_width not in VALID_OUTPUT_WIDTHS:
            raise ValueError(f"output width must be one of {VALID_OUTPUT_WIDTHS}")
        rng = np.random.default_rng(seed)
        widths = [input_width, *HIDDEN_WIDTHS, output_width]
        weights, biases = [], []
        for fan_in, fan_out in zip(widths[:-1], widths[1:]):
            scale = 1.0 / np.sqrt(fan_in)
            weights.append(rng.uniform(-scale, scale, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return cls(weights, biases)

    @property
    def input_width(self) -> int:
        return self.weights[0].shape[0]

    @property
    def output_width(self) -> int:
        return self.weights[-1].shape[1]

    def parameters(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def copy(self) -> "Mlp":
        return Mlp([w.copy() for w in self.weights],
                   [b.copy() for b in self.biases])

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Forward pass; accepts a single vector or a (batch, width) array."""
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        a = x[None, :] if single else x
        if a.shape[1] != self.input_width:
            raise ValueError(
                f"input width {a.shape[1]} != {self.input_width}")
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            a = a @ w + b
            if i < last:
                np.maximum(a, 0.0, out=a)
        return a[0] if single else a


def forward_batch(net: Mlp, x: np.ndarray) -> np.ndarray:
    return net.forward(x)


def masked_sq_loss(pred: np.ndarray, target: np.ndarray,
                   mask: np.ndarray) -> tuple[float, np.ndarray]:
    """Sum of squared errors over unmasked coordinates, and d(loss)/d(pred).

    Works on single vectors or batches; batch loss is the mean of the
    per-sample sums so the gradient scale is batch-size free.
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    mask = np.asarray(mask)
    if pred.shape != target.shape or pred.shape != mask.shape:
        raise ValueError("pred, target and mask must have identical shapes")
    err = (pred - target) * mask
    if pred.ndim == 1:
        return float(np.sum(err * err)), 2.0 * err
    batch = pred.shape[0]
    return float(np.sum(err * err) / batch), 2.0 * err / batch


def backward(net: Mlp, x: np.ndarray, target: np.ndarray,
             mask: np.ndarray) -> tuple[float, list[np.ndarray]]:
    """Loss and exact gradients for a batch, ordered like parameters()."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    target = np.atleast_2d(np.asarray(target, dtype=np.float64))
    mask = np.atleast_2d(np.asarray(mask, dtype=np.float64))
    zs = []
    a = x
    acts = [a]
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w + b
        zs.append(z)
        a = np.maximum(z, 0.0) if i < last else z
        acts.append(a)
    loss, delta = masked_sq_loss(acts[-1], target, mask)
    grads: list[np.ndarray] = []
    for i in range(last, -1, -1):
        gw = acts[i].T @ delta
        gb = delta.sum(axis=0)
        grads.append(gb)
        grads.append(gw)
        if i > 0:
            delta = (delta @ net.weights[i].T) * (zs[i - 1] > 0.0)
    grads.reverse()
    return loss, grads


@dataclass
class RmspropState:
    """Per-parameter accumulators for rmsprop with momentum."""

    mean_square: list[np.ndarray]
    momentum_buf: list[np.ndarray]
    decay: float = RMSPROP_DECAY
    momentum: float = RMSPROP_MOMENTUM
    lr: float = ETA
    step_rate: float = STEP_RATE
    eps: float = RMSPROP_EPS

    @classmethod
    def for_params(cls, params: list[np.ndarray], **kw) -> "RmspropState":
        # mean-square starts at one (not zero): a zero start makes the
        # first normalized steps enormous and blows the loss up before
        # recovery
        return cls([np.ones_like(p) for p in params],
                   [np.zeros_like(p) for p in params], **kw)

    def decay_lr(self) -> None:
        """Apply the per-epoch learning-rate decay."""
        self.lr *= self.step_rate


def rmsprop_step(params: list[np.ndarray], grads: list[np.ndarray],
                 state: RmspropState) -> None:
    """One in-place rmsprop-with-momentum update."""
    if len(params) != len(grads) or len(params) != len(state.mean_square):
        raise ValueError("parameter/gradient/state lengths differ")
    d, m, lr, eps = state.decay, state.momentum, state.lr, state.eps
    for p, g, ms, mo in zip(params, grads, state.mean_square,
                            state.momentum_buf):
        if p.shape != g.shape:
            raise ValueError("parameter/gradient shape mismatch")
        ms *= d
        ms += (1.0 - d) * g * g
        mo *= m
        mo += lr * g / np.sqrt(ms + eps)
        p -= mo


# ---------------------------------------------------------------------------
# Checkpoint bytes: magic "BBN1", u32 layer count L, u32 widths[L+1], then
# per layer the row-major float64 weight matrix followed by the bias vector.
# Little-endian throughout.
# ---------------------------------------------------------------------------


def net_to_bytes(net: Mlp) -> bytes:
    widths = [net.input_width] + [w.shape[1] for w in net.weights]
    out = [_MAGIC, struct.pack("<I", len(net.weights))]
    out.append(struct.pack(f"<{len(widths)}I", *widths))
    for w, b in zip(net.weights, net.biases):
        out.append(np.ascontiguousarray(w, dtype="<f8").tobytes())
        out.append(np.ascontiguousarray(b, dtype="<f8").tobytes())
    return b"".join(out)


def net_from_bytes(data: bytes, offset: int = 0) -> tuple[Mlp, int]:
    """Parse a network; returns (net, next offset)."""
    if data[offset:offset + 4] != _MAGIC:
        raise ValueError("bad network magic")
    offset += 4
    (n_layers,) = struct.unpack_from("<I", data, offset)
    offset += 4
    widths = struct.unpack_from(f"<{n_layers + 1}I", data, offset)
    offset += 4 * (n_layers + 1)
    weights, biases = [], []
    for i in range(n_layers):
        fan_in, fan_out = widths[i], widths[i + 1]
        w = np.frombuffer(data, "<f8", fan_in * fan_out, offset)
        offset += 8 * fan_in * fan_out
        b = np.frombuffer(data, "<f8", fan_out, offset)
        offset += 8 * fan_out
        weights.append(w.reshape(fan_in, fan_out).copy())
        biases.append(b.copy())
    return Mlp(weights, biases), offset
