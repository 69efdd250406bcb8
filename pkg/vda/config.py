"""
Augmentation configuration
"""

import math
from dataclasses import dataclass
from enum import Enum

from numerics.errors import ArgumentError

# Noise levels tuned over in the reference experiments; any sigma >= 0 is accepted.
SIGMA_SWEEP = (1e-3, 4e-3, 1e-2, 4e-2)
DEFAULT_SIGMA = 1e-2


class AugmentMode(str, Enum):
    MIXTURE = "mixture"
    ARGMAX = "argmax"
    SAMPLE = "sample"


class MixtureMatrix(str, Enum):
    CLASSIFIER = "classifier"
    FROZEN_MLM = "frozen_mlm"


class NoiseSource(str, Enum):
    CLEAN = "clean"
    NOISED = "noised"


@dataclass
class AugmentConfig:
    """
    Virtual data augmentation settings

    Args:
        sigma: Standard deviation of the Gaussian noise added to substitution probabilities
        k: Virtual draws per example
        mode: mixture (probability-weighted embeddings), argmax or sample
        protect_specials: Keep [CLS]/[SEP]/[PAD] rows unmixed
        mixture_matrix: Whose token embedding matrix is mixed
        temperature: Divides the softmax argument of the noised distribution;
            1.0 is the literal formulation
    """
    sigma: float = DEFAULT_SIGMA
    k: int = 1
    mode: AugmentMode = AugmentMode.MIXTURE
    protect_specials: bool = True
    mixture_matrix: MixtureMatrix = MixtureMatrix.CLASSIFIER
    temperature: float = 1.0

    def __post_init__(self):
        self.mode = AugmentMode(self.mode)
        self.mixture_matrix = MixtureMatrix(self.mixture_matrix)

    def validate(self) -> None:
        if self.sigma < 0 or math.isnan(self.sigma):
            raise ArgumentError(f"sigma must be non-negative, got {self.sigma}")
        if self.k < 1:
            raise ArgumentError(f"k must be >= 1, got {self.k}")
        if self.temperature <= 0:
            raise ArgumentError(f"temperature must be positive, got {self.temperature}")
