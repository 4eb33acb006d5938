"""Shared neural-network primitives for the corruptor and the detector.

Plain numpy float64 throughout. All reductions happen in fixed left-to-right
order so training is bit-reproducible for a given seed.
"""

from __future__ import annotations

import numpy as np


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def softmax(z):
    e = np.exp(z - np.max(z))
    return e / e.sum()


def lstm_step(W, U, b, x, h, c):
    """One LSTM step. Gate packing order along the 4H axis: i, f, o, g.

    Returns (h_next, c_next, cache) where cache feeds lstm_step_backward.
    """
    n = h.shape[0]
    z = W @ x + U @ h + b
    i = sigmoid(z[:n])
    f = sigmoid(z[n : 2 * n])
    o = sigmoid(z[2 * n : 3 * n])
    g = np.tanh(z[3 * n :])
    c2 = f * c + i * g
    tc = np.tanh(c2)
    h2 = o * tc
    return h2, c2, (x, h, c, i, f, o, g, tc)


def lstm_step_backward(dh2, dc2, cache, W, U, dW, dU, db):
    """Backprop one LSTM step; accumulates into dW/dU/db.

    Returns (dx, dh_prev, dc_prev).
    """
    x, h, c, i, f, o, g, tc = cache
    do = dh2 * tc
    dct = dc2 + dh2 * o * (1.0 - tc * tc)
    di = dct * g
    df = dct * c
    dg = dct * i
    dc_prev = dct * f
    dz = np.concatenate(
        [
            di * i * (1.0 - i),
            df * f * (1.0 - f),
            do * o * (1.0 - o),
            dg * (1.0 - g * g),
        ]
    )
    dW += np.outer(dz, x)
    dU += np.outer(dz, h)
    db += dz
    dx = W.T @ dz
    dh_prev = U.T @ dz
    return dx, dh_prev, dc_prev


def global_norm(grads):
    total = 0.0
    for name in sorted(grads):
        g = grads[name]
        total += float(np.dot(g.ravel(), g.ravel()))
    return np.sqrt(total)


def clip_gradients(grads, max_norm):
    """Scale the whole gradient set so its global L2 norm is <= max_norm."""
    norm = global_norm(grads)
    if norm > max_norm > 0:
        scale = max_norm / norm
        for g in grads.values():
            g *= scale
    return norm


def all_finite(arrays):
    return all(np.all(np.isfinite(a)) for a in arrays)
