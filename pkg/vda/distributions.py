"""
Distributions - Substitution probabilities from an unmasked MLM pass, and their noised copies
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from numerics import ops
from numerics.errors import ArgumentError
from numerics.rng import Rng
from numerics.tensor import Tensor, no_grad
from model.encoder import Encoder
from .config import NoiseSource


@dataclass
class SubstitutionDistribution:
    """
    Row-stochastic probabilities over the vocabulary for each position

    probs is [L, V] or [B, L, V] and carries no gradient.
    """
    probs: Tensor
    source: NoiseSource = NoiseSource.CLEAN
    sigma: float = 0.0
    draw_index: int = 0

    @property
    def vocab_size(self) -> int:
        return self.probs.shape[-1]


def substitution_distribution(f_mlm: Encoder, ids, mask: Optional[np.ndarray] = None) -> SubstitutionDistribution:
    """
    Softmax of the MLM logits over the unmasked input: one forward pass, no
    mask-and-complete loop
    """
    with no_grad():
        probs = ops.softmax(f_mlm.mlm_logits(ids, mask))
    return SubstitutionDistribution(Tensor(probs.data), NoiseSource.CLEAN, 0.0, 0)


def noised_from(clean: SubstitutionDistribution, noise: np.ndarray, sigma: float,
                temperature: float = 1.0, draw_index: int = 0) -> SubstitutionDistribution:
    """softmax((p + noise) / temperature) for an already drawn noise block"""
    if noise.shape != clean.probs.shape:
        raise ArgumentError(f"noise shape {noise.shape} != probs shape {clean.probs.shape}")
    with no_grad():
        probs = ops.softmax((clean.probs.data + noise) / temperature)
    return SubstitutionDistribution(Tensor(probs.data), NoiseSource.NOISED, float(sigma), draw_index)


def inject_noise(clean: SubstitutionDistribution, sigma: float, rng: Rng,
                 temperature: float = 1.0, draw_index: int = 0) -> SubstitutionDistribution:
    """
    p' = softmax(p + eps), eps ~ N(0, sigma^2 I) drawn per position

    The softmax is taken over probabilities, so even sigma = 0 pulls every
    row toward uniform. Noise is drawn in row-major (position-major) order.
    """
    if sigma < 0:
        raise ArgumentError(f"sigma must be non-negative, got {sigma}")
    noise = rng.gaussian(clean.probs.size, sigma).reshape(clean.probs.shape)
    return noised_from(clean, noise, sigma, temperature, draw_index)
