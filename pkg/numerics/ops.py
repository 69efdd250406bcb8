"""
Ops - Differentiable kernels over Tensor

Elementwise and linear kernels, the fused softmax family and the two loss
primitives (cross entropy, symmetric KL). Each kernel computes its forward
value with numpy and hands ``make_result`` a closure returning the gradient
of every input. Broadcast inputs get their gradients summed back to shape.
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ArgumentError, NumericError
from .tensor import Tensor, make_result

ArrayLike = Union[Tensor, np.ndarray, float, int, Sequence[float]]

LAYER_NORM_EPS = 1e-5
PROB_FLOOR = 1e-12


def as_tensor(x: ArrayLike) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` after numpy broadcasting"""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_check(a: Tensor, b: Tensor, op: str) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ArgumentError(f"{op}: shape mismatch {a.shape} vs {b.shape}") from None


def _check_finite(x: np.ndarray, op: str) -> None:
    if np.isnan(x).any():
        raise NumericError(f"{op}: NaN in input")


# ---------------------------------------------------------------- elementwise

def add(a: ArrayLike, b: ArrayLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_check(a, b, "add")

    def grad_fn(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return make_result(a.data + b.data, (a, b), grad_fn)


def sub(a: ArrayLike, b: ArrayLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_check(a, b, "sub")

    def grad_fn(g):
        return _unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)

    return make_result(a.data - b.data, (a, b), grad_fn)


def mul(a: ArrayLike, b: ArrayLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_check(a, b, "mul")

    def grad_fn(g):
        return _unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)

    return make_result(a.data * b.data, (a, b), grad_fn)


def neg(a: ArrayLike) -> Tensor:
    return scale(a, -1.0)


def scale(a: ArrayLike, c: float) -> Tensor:
    """Multiply by a constant scalar"""
    a = as_tensor(a)
    c = float(c)
    return make_result(a.data * c, (a,), lambda g: (g * c,))


def relu(a: ArrayLike) -> Tensor:
    a = as_tensor(a)
    mask = a.data > 0
    return make_result(np.where(mask, a.data, 0.0), (a,), lambda g: (g * mask,))


def exp(a: ArrayLike) -> Tensor:
    a = as_tensor(a)
    out = np.exp(a.data)
    return make_result(out, (a,), lambda g: (g * out,))


def log(a: ArrayLike) -> Tensor:
    a = as_tensor(a)
    if (a.data <= 0).any():
        raise NumericError("log: non-positive input")
    return make_result(np.log(a.data), (a,), lambda g: (g / a.data,))


def clamp_min(a: ArrayLike, floor: float) -> Tensor:
    """max(a, floor); gradient passes only where a > floor"""
    a = as_tensor(a)
    mask = a.data > floor
    return make_result(np.where(mask, a.data, floor), (a,), lambda g: (g * mask,))


def where(cond: np.ndarray, a: ArrayLike, b: ArrayLike) -> Tensor:
    """Select from ``a`` where ``cond`` holds, else from ``b``"""
    a, b = as_tensor(a), as_tensor(b)
    cond = np.asarray(cond, dtype=bool)
    try:
        np.broadcast_shapes(cond.shape, a.shape, b.shape)
    except ValueError:
        raise ArgumentError(
            f"where: shape mismatch {cond.shape}, {a.shape}, {b.shape}"
        ) from None

    def grad_fn(g):
        return (
            _unbroadcast(np.where(cond, g, 0.0), a.shape),
            _unbroadcast(np.where(cond, 0.0, g), b.shape),
        )

    return make_result(np.where(cond, a.data, b.data), (a, b), grad_fn)


# ---------------------------------------------------------------- shape

def reshape(a: ArrayLike, shape: Tuple[int, ...]) -> Tensor:
    a = as_tensor(a)
    try:
        out = a.data.reshape(shape)
    except ValueError:
        raise ArgumentError(f"reshape: cannot view {a.shape} as {shape}") from None
    return make_result(out, (a,), lambda g: (g.reshape(a.shape),))


def transpose(a: ArrayLike, axes: Optional[Sequence[int]] = None) -> Tensor:
    a = as_tensor(a)
    if axes is None:
        axes = tuple(reversed(range(a.ndim)))
    axes = tuple(axes)
    inverse = tuple(np.argsort(axes))
    return make_result(np.transpose(a.data, axes), (a,), lambda g: (np.transpose(g, inverse),))


def getitem(a: ArrayLike, key) -> Tensor:
    a = as_tensor(a)

    def grad_fn(g):
        full = np.zeros_like(a.data)
        np.add.at(full, key, g)
        return (full,)

    return make_result(a.data[key], (a,), grad_fn)


# ---------------------------------------------------------------- reductions

def _expand(g: np.ndarray, shape: Tuple[int, ...], axis, keepdims: bool) -> np.ndarray:
    if axis is not None and not keepdims:
        g = np.expand_dims(g, axis)
    return np.broadcast_to(g, shape)


def sum(a: ArrayLike, axis=None, keepdims: bool = False) -> Tensor:  # noqa: A001
    a = as_tensor(a)
    out = a.data.sum(axis=axis, keepdims=keepdims)
    return make_result(out, (a,), lambda g: (_expand(g, a.shape, axis, keepdims),))


def mean(a: ArrayLike, axis=None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    out = a.data.mean(axis=axis, keepdims=keepdims)
    count = a.size // max(out.size, 1)
    return make_result(out, (a,), lambda g: (_expand(g, a.shape, axis, keepdims) / count,))


# ---------------------------------------------------------------- linear

def matmul(a: ArrayLike, b: ArrayLike) -> Tensor:
    """Batched matrix product over the last two axes"""
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2:
        raise ArgumentError(f"matmul needs matrices, got {a.shape} and {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ArgumentError(f"matmul: shape mismatch {a.shape} @ {b.shape}")
    try:
        np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    except ValueError:
        raise ArgumentError(f"matmul: batch mismatch {a.shape} @ {b.shape}") from None

    def grad_fn(g):
        ga = g @ np.swapaxes(b.data, -1, -2)
        gb = np.swapaxes(a.data, -1, -2) @ g
        return _unbroadcast(ga, a.shape), _unbroadcast(gb, b.shape)

    return make_result(a.data @ b.data, (a, b), grad_fn)


def embedding_lookup(table: Tensor, ids) -> Tensor:
    """Rows of ``table`` at integer ``ids`` (any shape)"""
    ids = np.asarray(ids, dtype=np.int64)
    if table.ndim != 2:
        raise ArgumentError(f"embedding table must be 2-D, got {table.shape}")
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise ArgumentError(
            f"token id out of range [0, {table.shape[0]}): {int(ids.max())}"
        )

    def grad_fn(g):
        full = np.zeros_like(table.data)
        np.add.at(full, ids, g)
        return (full,)

    return make_result(table.data[ids], (table,), grad_fn)


def layer_norm(
    x: ArrayLike,
    gamma: Optional[Tensor] = None,
    beta: Optional[Tensor] = None,
    eps: float = LAYER_NORM_EPS,
) -> Tensor:
    """Normalise the last axis; constant rows map to zero before the affine part"""
    x = as_tensor(x)
    width = x.shape[-1]
    for name, p in (("gamma", gamma), ("beta", beta)):
        if p is not None and p.shape != (width,):
            raise ArgumentError(f"layer_norm: {name} shape {p.shape} != ({width},)")
    mu = x.data.mean(axis=-1, keepdims=True)
    centred = x.data - mu
    inv_std = 1.0 / np.sqrt((centred ** 2).mean(axis=-1, keepdims=True) + eps)
    xhat = centred * inv_std
    out = xhat
    if gamma is not None:
        out = out * gamma.data
    if beta is not None:
        out = out + beta.data

    parents = tuple(p for p in (x, gamma, beta) if p is not None)

    def grad_fn(g):
        dxhat = g * gamma.data if gamma is not None else g
        dx = inv_std / width * (
            width * dxhat
            - dxhat.sum(axis=-1, keepdims=True)
            - xhat * (dxhat * xhat).sum(axis=-1, keepdims=True)
        )
        grads = [dx]
        lead = tuple(range(g.ndim - 1))
        if gamma is not None:
            grads.append((g * xhat).sum(axis=lead))
        if beta is not None:
            grads.append(g.sum(axis=lead))
        return grads

    return make_result(out, parents, grad_fn)


# ---------------------------------------------------------------- softmax family

def _softmax_data(x: np.ndarray, axis: int) -> np.ndarray:
    shifted = x - x.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


def softmax(x: ArrayLike, axis: int = -1) -> Tensor:
    """Max-subtracted softmax along ``axis``"""
    x = as_tensor(x)
    _check_finite(x.data, "softmax")
    y = _softmax_data(x.data, axis)

    def grad_fn(g):
        return (y * (g - (g * y).sum(axis=axis, keepdims=True)),)

    return make_result(y, (x,), grad_fn)


def log_softmax(x: ArrayLike, axis: int = -1) -> Tensor:
    x = as_tensor(x)
    _check_finite(x.data, "log_softmax")
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    out = shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    probs = np.exp(out)

    def grad_fn(g):
        return (g - probs * g.sum(axis=axis, keepdims=True),)

    return make_result(out, (x,), grad_fn)


def cross_entropy(logits: ArrayLike, labels, reduction: str = "mean") -> Tensor:
    """
    -log softmax(logits)[label] via a fused log-softmax

    Args:
        logits: [..., C]
        labels: Class index (for 1-D logits) or integer array of shape logits.shape[:-1]
        reduction: 'mean', 'sum' or 'none'
    """
    logits = as_tensor(logits)
    _check_finite(logits.data, "cross_entropy")
    labels = np.asarray(labels, dtype=np.int64)
    classes = logits.shape[-1]
    if labels.shape != logits.shape[:-1]:
        raise ArgumentError(f"labels shape {labels.shape} != {logits.shape[:-1]}")
    if labels.size and (labels.min() < 0 or labels.max() >= classes):
        raise ArgumentError(f"label out of range [0, {classes})")
    if reduction not in ("mean", "sum", "none"):
        raise ArgumentError(f"unknown reduction {reduction!r}")

    shifted = logits.data - logits.data.max(axis=-1, keepdims=True)
    lsm = shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
    nll = -np.take_along_axis(lsm, labels[..., None], axis=-1)[..., 0]
    count = max(nll.size, 1)
    if reduction == "none":
        out = nll
    elif reduction == "sum":
        out = np.asarray(nll.sum())
    else:
        out = np.asarray(nll.sum() / count)

    def grad_fn(g):
        delta = np.exp(lsm)
        np.put_along_axis(
            delta,
            labels[..., None],
            np.take_along_axis(delta, labels[..., None], axis=-1) - 1.0,
            axis=-1,
        )
        if reduction == "none":
            return (delta * g[..., None],)
        if reduction == "mean":
            return (delta * (g / count),)
        return (delta * g,)

    return make_result(out, (logits,), grad_fn)


def sym_kl(logits_p: ArrayLike, logits_q: ArrayLike, reduction: str = "none") -> Tensor:
    """
    KL(p||q) + KL(q||p) of the softmaxed distributions along the last axis

    Written as sum((p - q) * (log p - log q)) with probabilities floored at
    PROB_FLOOR, so swapping the arguments negates both factors exactly.
    """
    a, b = as_tensor(logits_p), as_tensor(logits_q)
    if a.shape != b.shape:
        raise ArgumentError(f"sym_kl: shape mismatch {a.shape} vs {b.shape}")
    if reduction not in ("mean", "sum", "none"):
        raise ArgumentError(f"unknown reduction {reduction!r}")
    p, q = softmax(a), softmax(b)
    log_ratio = sub(log(clamp_min(p, PROB_FLOOR)), log(clamp_min(q, PROB_FLOOR)))
    per_row = sum(mul(sub(p, q), log_ratio), axis=-1)
    if reduction == "mean":
        return mean(per_row)
    if reduction == "sum":
        return sum(per_row)
    return per_row


# ---------------------------------------------------------------- operators

Tensor.__add__ = lambda self, other: add(self, other)
Tensor.__radd__ = lambda self, other: add(other, self)
Tensor.__sub__ = lambda self, other: sub(self, other)
Tensor.__rsub__ = lambda self, other: sub(other, self)
Tensor.__mul__ = lambda self, other: mul(self, other)
Tensor.__rmul__ = lambda self, other: mul(other, self)
Tensor.__neg__ = lambda self: neg(self)
Tensor.__truediv__ = lambda self, c: scale(self, 1.0 / c)
Tensor.__matmul__ = lambda self, other: matmul(self, other)
Tensor.__getitem__ = lambda self, key: getitem(self, key)
Tensor.sum = lambda self, axis=None, keepdims=False: sum(self, axis, keepdims)
Tensor.mean = lambda self, axis=None, keepdims=False: mean(self, axis, keepdims)
Tensor.reshape = lambda self, *shape: reshape(
    self, shape[0] if len(shape) == 1 and isinstance(shape[0], tuple) else shape
)
Tensor.transpose = lambda self, *axes: transpose(self, axes or None)
Tensor.relu = lambda self: relu(self)
