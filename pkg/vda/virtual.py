"""
Virtual - Embeddings built as probability-weighted mixtures of token embeddings
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from numerics import ops
from numerics.errors import ArgumentError
from numerics.rng import Rng
from numerics.tensor import Tensor
from textio.vocab import CLS_ID, PAD_ID, SEP_ID
from .config import AugmentMode
from .distributions import SubstitutionDistribution

PROTECTED_IDS = (CLS_ID, SEP_ID, PAD_ID)


@dataclass
class VirtualBatch:
    """Augmented embeddings for one draw; shape matches the original embeddings"""
    embeddings: Tensor
    k_index: int = 0
    mode: AugmentMode = AugmentMode.MIXTURE
    sigma: float = 0.0
    origin: Optional[object] = None


def _one_hot(index: np.ndarray, width: int) -> np.ndarray:
    out = np.zeros(index.shape + (width,), dtype=np.float64)
    np.put_along_axis(out, index[..., None], 1.0, axis=-1)
    return out


def mixture_weights(noised: SubstitutionDistribution, mode: AugmentMode, ids=None,
                    protect_specials: bool = True, rng: Optional[Rng] = None) -> np.ndarray:
    """Rows actually multiplied into M_E for the given mode"""
    probs = noised.probs.data
    mode = AugmentMode(mode)
    if mode == AugmentMode.ARGMAX:
        weights = _one_hot(probs.argmax(axis=-1), probs.shape[-1])
    elif mode == AugmentMode.SAMPLE:
        if rng is None:
            raise ArgumentError("sample mode needs an rng")
        weights = _one_hot(rng.categorical(probs), probs.shape[-1])
    else:
        weights = probs.copy()

    if protect_specials and ids is not None:
        ids = np.asarray(ids, dtype=np.int64)
        if ids.shape != probs.shape[:-1]:
            raise ArgumentError(f"ids shape {ids.shape} != positions {probs.shape[:-1]}")
        protected = np.isin(ids, PROTECTED_IDS)
        weights[protected] = _one_hot(ids[protected], probs.shape[-1])
    return weights


def virtual_embeddings(noised: SubstitutionDistribution, token_embeddings: Tensor,
                       mode: AugmentMode = AugmentMode.MIXTURE, ids=None,
                       protect_specials: bool = True, positional: Optional[Tensor] = None,
                       rng: Optional[Rng] = None, k_index: int = 0,
                       origin: Optional[object] = None) -> VirtualBatch:
    """
    E_hat = weights . M_E, plus positional embeddings when given

    Args:
        noised: Distribution to mix with
        token_embeddings: M_E [V, d]; gradients flow into it when it requires them
        mode: mixture, argmax (one-hot at the row maximum) or sample (one-hot draw)
        ids: Original ids, needed for protect_specials
        positional: [L, d] rows added after mixing, as in forward_embeddings
        rng: Required for sample mode
    """
    if token_embeddings.ndim != 2 or noised.vocab_size != token_embeddings.shape[0]:
        raise ArgumentError(
            f"probability width {noised.vocab_size} does not match M_E rows {token_embeddings.shape}"
        )
    weights = mixture_weights(noised, mode, ids, protect_specials, rng)
    mixed = ops.matmul(Tensor(weights), token_embeddings)
    if positional is not None:
        mixed = mixed + positional
    return VirtualBatch(mixed, k_index, AugmentMode(mode), noised.sigma, origin)
