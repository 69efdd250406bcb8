"""
Pretrain - Masked-token pretraining and MLM diagnostics for the toy encoder

Masking follows the usual recipe: each content position is selected with
probability mask_prob; a selected position becomes [MASK] 80% of the time,
a random content token 10% and stays unchanged 10%. The loss is cross
entropy on selected positions only.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from numerics import ops
from numerics.errors import DataError
from numerics.optim import Adam, WarmupSchedule, adam_step
from numerics.rng import Rng
from numerics.tensor import backward, no_grad
from textio.encoding import pad_batch
from textio.vocab import MASK_ID, SPECIAL_TOKENS
from .encoder import Encoder

logger = logging.getLogger(__name__)

FIRST_CONTENT_ID = len(SPECIAL_TOKENS)
# A pretrained MLM is accepted when dev masked loss falls and its unmasked
# argmax recovers the input token at least this often.
PILOT_RECOVERY_THRESHOLD = 0.60


def _sequences(corpus) -> List[Tuple[int, ...]]:
    return [tuple(getattr(item, "ids", item)) for item in corpus]


def mask_tokens(ids: np.ndarray, mask: np.ndarray, rng: Rng, mask_prob: float,
                vocab_size: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Corrupt a padded batch for the masked-token objective

    Returns:
        (corrupted ids, flat indices of selected positions)
    """
    candidates = mask & (ids >= FIRST_CONTENT_ID)
    selected = (rng.uniform(ids.size).reshape(ids.shape) < mask_prob) & candidates
    if not selected.any():
        flat_candidates = np.flatnonzero(candidates)
        if flat_candidates.size == 0:
            return ids.copy(), np.zeros(0, dtype=np.int64)
        pick = flat_candidates[int(rng.randint(1, flat_candidates.size)[0])]
        selected.reshape(-1)[pick] = True

    positions = np.flatnonzero(selected)
    action = rng.uniform(positions.size)
    random_ids = FIRST_CONTENT_ID + rng.randint(positions.size, vocab_size - FIRST_CONTENT_ID)
    corrupted = ids.copy().reshape(-1)
    corrupted[positions] = np.where(
        action < 0.8, MASK_ID, np.where(action < 0.9, random_ids, corrupted[positions])
    )
    return corrupted.reshape(ids.shape), positions


def _masked_loss(encoder: Encoder, batch: Sequence[Tuple[int, ...]], rng: Rng, mask_prob: float):
    ids, mask = pad_batch(batch)
    corrupted, positions = mask_tokens(ids, mask, rng, mask_prob, encoder.config.vocab_size)
    if positions.size == 0:
        return None
    logits = encoder.mlm_logits(corrupted, mask)
    flat = logits.reshape(-1, encoder.config.vocab_size)
    return ops.cross_entropy(flat[positions], ids.reshape(-1)[positions])


def pretrain_mlm(encoder: Encoder, corpus, steps: int, rng: Rng, mask_prob: float = 0.15,
                 batch_size: int = 32, lr: float = 1e-3, warmup_frac: float = 0.05,
                 show_progress: bool = False) -> List[float]:
    """
    Train ``encoder`` on the masked-token objective

    Args:
        encoder: Model to update in place
        corpus: EncodedExamples or id sequences
        steps: Optimizer steps (0 leaves the encoder untouched)
        rng: Batch sampling and masking stream

    Returns:
        Per-step training losses
    """
    sequences = _sequences(corpus)
    if not sequences:
        raise DataError("empty pretraining corpus")
    if steps <= 0:
        return []

    optimizer = Adam(encoder.parameters(), schedule=WarmupSchedule(lr, steps, warmup_frac))
    losses: List[float] = []
    for _ in tqdm(range(steps), desc="pretrain", disable=not show_progress):
        picks = rng.randint(batch_size, len(sequences))
        loss = _masked_loss(encoder, [sequences[i] for i in picks], rng, mask_prob)
        if loss is None:
            continue
        backward(loss)
        adam_step(optimizer)
        losses.append(loss.item())
    logger.info("pretrained %d steps, final loss %.4f", steps, losses[-1] if losses else float("nan"))
    return losses


def mlm_loss(encoder: Encoder, corpus, seed: int = 0, mask_prob: float = 0.15,
             batch_size: int = 64) -> float:
    """Mean masked-token cross entropy with a fixed masking seed"""
    sequences = _sequences(corpus)
    rng = Rng(seed)
    total, batches = 0.0, 0
    with no_grad():
        for start in range(0, len(sequences), batch_size):
            loss = _masked_loss(encoder, sequences[start:start + batch_size], rng, mask_prob)
            if loss is not None:
                total += loss.item()
                batches += 1
    return total / max(batches, 1)


def original_token_ranks(encoder: Encoder, corpus, batch_size: int = 64) -> np.ndarray:
    """Rank (0 = top) of each content input token in its own unmasked MLM row"""
    sequences = _sequences(corpus)
    ranks = []
    with no_grad():
        for start in range(0, len(sequences), batch_size):
            ids, mask = pad_batch(sequences[start:start + batch_size])
            logits = encoder.mlm_logits(ids, mask).data
            own = np.take_along_axis(logits, ids[..., None], axis=-1)
            rank = (logits > own).sum(axis=-1)
            ranks.append(rank[mask & (ids >= FIRST_CONTENT_ID)])
    return np.concatenate(ranks) if ranks else np.zeros(0, dtype=np.int64)


def mlm_token_recovery(encoder: Encoder, corpus) -> float:
    """Fraction of content positions whose unmasked argmax is the input token"""
    ranks = original_token_ranks(encoder, corpus)
    return float((ranks == 0).mean()) if ranks.size else 0.0


def pilot_passes(loss_before: float, loss_after: float, recovery: float,
                 threshold: float = PILOT_RECOVERY_THRESHOLD) -> bool:
    return loss_after < loss_before and recovery >= threshold
