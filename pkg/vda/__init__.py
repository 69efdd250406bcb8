"""
VDA: substitution distributions, Gaussian noise and virtual embedding mixtures
"""

from .config import (
    DEFAULT_SIGMA,
    SIGMA_SWEEP,
    AugmentConfig,
    AugmentMode,
    MixtureMatrix,
    NoiseSource,
)
from .distributions import (
    SubstitutionDistribution,
    inject_noise,
    noised_from,
    substitution_distribution,
)
from .virtual import PROTECTED_IDS, VirtualBatch, mixture_weights, virtual_embeddings
from .augment import (
    augment,
    displacement_curve,
    draw_virtual,
    embedding_displacement,
    mixture_matrix,
)

__all__ = [
    'DEFAULT_SIGMA', 'SIGMA_SWEEP', 'AugmentConfig', 'AugmentMode', 'MixtureMatrix', 'NoiseSource',
    'SubstitutionDistribution', 'inject_noise', 'noised_from', 'substitution_distribution',
    'PROTECTED_IDS', 'VirtualBatch', 'mixture_weights', 'virtual_embeddings',
    'augment', 'displacement_curve', 'draw_virtual', 'embedding_displacement', 'mixture_matrix',
]
