"""
Optim - Adam with a linear-warmup learning-rate schedule
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from .errors import ArgumentError, StateError
from .tensor import Tensor

logger = logging.getLogger(__name__)


class WarmupSchedule:
    """
    Linear warmup over the first ``warmup_frac`` of steps, then constant
    (or linearly decaying to zero with ``decay='linear'``)

    Args:
        base_lr: Peak learning rate
        total_steps: Planned number of optimizer steps
        warmup_frac: Fraction of total_steps spent warming up
        decay: 'constant' or 'linear'
    """

    def __init__(self, base_lr: float, total_steps: int,
                 warmup_frac: float = 0.05, decay: str = "constant"):
        if base_lr <= 0:
            raise ArgumentError(f"base_lr must be positive, got {base_lr}")
        if not 0 <= warmup_frac < 1:
            raise ArgumentError(f"warmup_frac must be in [0, 1), got {warmup_frac}")
        if decay not in ("constant", "linear"):
            raise ArgumentError(f"unknown decay {decay!r}")
        self.base_lr = base_lr
        self.total_steps = max(int(total_steps), 1)
        self.warmup_steps = (
            max(1, int(math.ceil(warmup_frac * self.total_steps))) if warmup_frac > 0 else 0
        )
        self.decay = decay
        self.step = 0

    def lr_at(self, step: int) -> float:
        if step < self.warmup_steps:
            return self.base_lr * (step + 1) / self.warmup_steps
        if self.decay == "linear":
            span = max(self.total_steps - self.warmup_steps, 1)
            return self.base_lr * max(self.total_steps - step, 0) / span
        return self.base_lr

    def advance(self) -> float:
        """Learning rate for the current step; moves the schedule forward"""
        lr = self.lr_at(self.step)
        self.step += 1
        return lr


class Adam:
    """
    Adam optimizer updating Tensor parameters in place

    Args:
        params: Tensors with requires_grad
        lr: Learning rate used when no schedule is given
        betas: Moment decay rates
        eps: Denominator floor
        schedule: Optional WarmupSchedule overriding ``lr``
    """

    def __init__(self, params: Sequence[Tensor], lr: float = 1e-3,
                 betas=(0.9, 0.999), eps: float = 1e-8,
                 schedule: Optional[WarmupSchedule] = None):
        self.params: List[Tensor] = list(params)
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.schedule = schedule
        self.t = 0
        self.m = [np.zeros_like(p.data) for p in self.params]
        self.v = [np.zeros_like(p.data) for p in self.params]
        self.last_lr = 0.0

    def zero_grad(self) -> None:
        for p in self.params:
            p.grad = None

    def step(self) -> float:
        """Apply one update; returns the learning rate used"""
        missing = [p.name or f"#{i}" for i, p in enumerate(self.params) if p.grad is None]
        if missing:
            raise StateError(f"no gradient for parameters: {', '.join(missing[:5])}")

        lr = self.schedule.advance() if self.schedule is not None else self.lr
        self.t += 1
        bc1 = 1.0 - self.beta1 ** self.t
        bc2 = 1.0 - self.beta2 ** self.t
        for p, m, v in zip(self.params, self.m, self.v):
            g = p.grad
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p.data -= lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)
        self.last_lr = lr
        return lr


def adam_step(optimizer: Adam) -> float:
    """One optimizer step followed by clearing gradients"""
    lr = optimizer.step()
    optimizer.zero_grad()
    return lr
