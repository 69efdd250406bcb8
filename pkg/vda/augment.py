"""
Augment - k virtual draws per example from one clean substitution pass

Stream order: all noise for the call is drawn as one block shaped
[..., L, k, V] (position-major, then draw index); sample mode then draws
its one-hot picks draw by draw.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from numerics.errors import ArgumentError
from numerics.rng import Rng
from numerics.tensor import Tensor, no_grad
from model.encoder import Encoder
from .config import AugmentConfig, AugmentMode, MixtureMatrix
from .distributions import SubstitutionDistribution, noised_from, substitution_distribution
from .virtual import VirtualBatch, virtual_embeddings

logger = logging.getLogger(__name__)


def mixture_matrix(cfg: AugmentConfig, f_mlm: Encoder, encoder: Optional[Encoder]) -> Tensor:
    """M_E used for mixing: the classifier's (trainable) or a frozen copy of the MLM's"""
    if cfg.mixture_matrix == MixtureMatrix.FROZEN_MLM or encoder is None:
        return Tensor(f_mlm.token_embeddings.data)
    return encoder.token_embeddings


def augment(f_mlm: Encoder, ids, cfg: AugmentConfig, rng: Rng,
            encoder: Optional[Encoder] = None, mask: Optional[np.ndarray] = None,
            origin: Optional[object] = None) -> List[VirtualBatch]:
    """
    Build cfg.k virtual batches for ``ids``

    Args:
        f_mlm: Frozen masked language model scoring substitutions
        ids: [L] or [B, L] token ids
        cfg: AugmentConfig
        rng: Noise (and sample-mode) stream
        encoder: Classifier encoder supplying positions and, in classifier
            mode, the mixed M_E; defaults to f_mlm
        mask: [B, L] padding mask for the MLM pass
    """
    cfg.validate()
    ids = np.asarray(ids, dtype=np.int64)
    target = encoder if encoder is not None else f_mlm
    if ids.shape[-1] > target.config.max_len:
        raise ArgumentError(f"sequence length {ids.shape[-1]} exceeds max_len {target.config.max_len}")

    clean = substitution_distribution(f_mlm, ids, mask)
    shape = clean.probs.shape
    noise = rng.gaussian(int(np.prod(shape)) * cfg.k, cfg.sigma)
    noise = noise.reshape(shape[:-1] + (cfg.k, shape[-1]))

    table = mixture_matrix(cfg, f_mlm, encoder)
    positional = target.positions(ids.shape[-1])
    return [
        draw_virtual(clean, noise[..., j, :], ids, cfg, rng, table, positional, j, origin)
        for j in range(cfg.k)
    ]


def draw_virtual(clean: SubstitutionDistribution, noise: np.ndarray, ids, cfg: AugmentConfig,
                 rng: Rng, table: Tensor, positional: Optional[Tensor], k_index: int = 0,
                 origin: Optional[object] = None) -> VirtualBatch:
    """One virtual batch from a clean distribution and its noise block"""
    noised = noised_from(clean, noise, cfg.sigma, cfg.temperature, k_index)
    return virtual_embeddings(
        noised, table, cfg.mode, ids, cfg.protect_specials, positional,
        rng if cfg.mode == AugmentMode.SAMPLE else None, k_index, origin,
    )


def embedding_displacement(f_mlm: Encoder, ids, sigma: float, draws: int, seed: int,
                           reference: str = "clean", temperature: float = 1.0) -> float:
    """
    Mean L2 distance between virtual token embeddings and a reference

    reference='original' compares against the real token rows,
    reference='clean' against the noiseless mixture. Every sigma reuses the
    same standard-normal draws (seeded) in antithetic pairs, so curves over
    sigma differ only through sigma itself.
    """
    if reference not in ("clean", "original"):
        raise ArgumentError(f"unknown reference {reference!r}")
    if draws < 2 or draws % 2:
        raise ArgumentError(f"draws must be an even count >= 2, got {draws}")
    ids = np.asarray(ids, dtype=np.int64)
    clean = substitution_distribution(f_mlm, ids)
    table = Tensor(f_mlm.token_embeddings.data)
    with no_grad():
        if reference == "original":
            base = table.data[ids]
        else:
            base = virtual_embeddings(
                noised_from(clean, np.zeros(clean.probs.shape), 0.0, temperature), table, ids=ids
            ).embeddings.data
        unit = Rng(seed).normal(clean.probs.size * (draws // 2)).reshape((draws // 2,) + clean.probs.shape)
        total = 0.0
        for z in unit:
            for sign in (1.0, -1.0):
                noised = noised_from(clean, sign * sigma * z, sigma, temperature)
                mixed = virtual_embeddings(noised, table, ids=ids).embeddings.data
                total += float(np.linalg.norm(mixed - base, axis=-1).mean())
    return total / draws


def displacement_curve(f_mlm: Encoder, ids, sigmas: Sequence[float], draws: int = 100,
                       seed: int = 0, reference: str = "clean") -> List[float]:
    return [embedding_displacement(f_mlm, ids, s, draws, seed, reference) for s in sigmas]
