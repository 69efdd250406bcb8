"""
Gradcheck - Central finite differences against the tape's gradients
"""

from typing import Callable, Dict, Sequence

import numpy as np

from .tensor import Tensor, backward, no_grad

DENOMINATOR_FLOOR = 1e-6


def numerical_gradient(loss_fn: Callable[[], Tensor], param: Tensor, h: float = 1e-5) -> np.ndarray:
    """d loss / d param by central differences, perturbing ``param.data`` in place"""
    grad = np.zeros_like(param.data)
    flat = param.data.reshape(-1)
    out = grad.reshape(-1)
    with no_grad():
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + h
            plus = loss_fn().item()
            flat[i] = original - h
            minus = loss_fn().item()
            flat[i] = original
            out[i] = (plus - minus) / (2 * h)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """max |a - n| / max(|a| + |n|, DENOMINATOR_FLOOR)"""
    denom = np.maximum(np.abs(analytic) + np.abs(numeric), DENOMINATOR_FLOOR)
    return float((np.abs(analytic - numeric) / denom).max(initial=0.0))


def check_gradients(loss_fn: Callable[[], Tensor], params: Sequence[Tensor],
                    h: float = 1e-5) -> Dict[str, float]:
    """
    Compare analytic and numerical gradients for every parameter

    Returns:
        Mapping of parameter name (or index) to max relative error
    """
    for p in params:
        p.grad = None
    backward(loss_fn())
    errors = {}
    for i, p in enumerate(params):
        analytic = p.grad if p.grad is not None else np.zeros_like(p.data)
        errors[p.name or str(i)] = relative_error(analytic, numerical_gradient(loss_fn, p, h))
    return errors
