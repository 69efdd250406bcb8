"""
Numerics: seeded randomness and a reverse-mode autodiff tensor engine
"""

from .errors import ArgumentError, DataError, NumericError, StateError, VDAError
from .tensor import Tensor, Tape, active_tape, backward, clear_tape, no_grad
from .ops import (
    add,
    as_tensor,
    clamp_min,
    cross_entropy,
    embedding_lookup,
    exp,
    getitem,
    layer_norm,
    log,
    log_softmax,
    matmul,
    mean,
    mul,
    relu,
    reshape,
    scale,
    softmax,
    sub,
    sym_kl,
    transpose,
    where,
)
from .rng import Rng, gaussian_vector
from .optim import Adam, WarmupSchedule, adam_step
from .gradcheck import check_gradients, numerical_gradient, relative_error

__all__ = [
    'VDAError', 'ArgumentError', 'DataError', 'NumericError', 'StateError',
    'Tensor', 'Tape', 'active_tape', 'backward', 'clear_tape', 'no_grad',
    'add', 'as_tensor', 'clamp_min', 'cross_entropy', 'embedding_lookup', 'exp',
    'getitem', 'layer_norm', 'log', 'log_softmax', 'matmul', 'mean', 'mul',
    'relu', 'reshape', 'scale', 'softmax', 'sub', 'sym_kl', 'transpose', 'where',
    'Rng', 'gaussian_vector',
    'Adam', 'WarmupSchedule', 'adam_step',
    'check_gradients', 'numerical_gradient', 'relative_error',
]
