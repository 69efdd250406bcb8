"""
Greedy - Importance-ranked greedy word substitution against a black-box victim

Two phases, in the style of MLM-driven substitution attacks:

1. Rank attackable positions by how much the gold-class probability drops
   when the word is replaced with [UNK] (one victim query per position).
2. Walk positions in rank order; at each, try the MLM's top-k candidate
   tokens (one victim query each) and keep the one that lowers the gold
   probability most. Stop on a label flip or when the perturbation budget
   floor(max_perturb_frac * attackable), at least 1, is spent.

Victim queries are counted; MLM passes belong to the attacker and are not.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from numerics.errors import ArgumentError
from numerics.tensor import no_grad
from model.encoder import Encoder
from model.pretrain import FIRST_CONTENT_ID
from textio.encoding import EncodedExample
from textio.vocab import UNK_ID, Vocab
from .victim import Victim

logger = logging.getLogger(__name__)

SynonymIds = Dict[int, Tuple[int, ...]]


@dataclass
class AttackConfig:
    """
    Attack settings

    Args:
        top_k_candidates: MLM candidates tried per position
        max_perturb_frac: Largest fraction of attackable words that may change
        sample_size: Examples drawn for a robustness evaluation
        seed: Sampling seed
        synonyms: Optional token id -> allowed substitute ids; when set,
            candidates are the MLM's top-k inside that set
        show_progress: tqdm bar over attacked examples
    """
    top_k_candidates: int = 8
    max_perturb_frac: float = 0.4
    sample_size: int = 1000
    seed: int = 0
    synonyms: Optional[SynonymIds] = None
    show_progress: bool = False

    def validate(self) -> None:
        if self.top_k_candidates < 1:
            raise ArgumentError(f"top_k_candidates must be >= 1, got {self.top_k_candidates}")
        if not 0 < self.max_perturb_frac <= 1:
            raise ArgumentError(f"max_perturb_frac must be in (0, 1], got {self.max_perturb_frac}")
        if self.sample_size < 1:
            raise ArgumentError(f"sample_size must be >= 1, got {self.sample_size}")


@dataclass
class AttackResult:
    example_id: int
    label: int
    originally_correct: bool
    success: bool
    queries: int
    perturbed_positions: List[int]
    perturbed_pct: float
    final_ids: Tuple[int, ...]
    original_ids: Tuple[int, ...] = ()
    attackable_count: int = 0

    def to_dict(self) -> Dict:
        return {
            "example_id": self.example_id,
            "label": self.label,
            "originally_correct": self.originally_correct,
            "success": self.success,
            "queries": self.queries,
            "perturbed_positions": list(self.perturbed_positions),
            "perturbed_pct": self.perturbed_pct,
            "final_ids": list(self.final_ids),
        }


def synonym_ids(vocab: Vocab, table: Dict[str, Iterable[str]]) -> SynonymIds:
    """Map a word -> synonyms table onto in-vocabulary token ids"""
    out: SynonymIds = {}
    for word, others in table.items():
        if word not in vocab:
            continue
        ids = tuple(sorted({vocab.id(w) for w in others if w in vocab}))
        if ids:
            out[vocab.id(word)] = ids
    return out


def perturbation_budget(attackable: int, max_perturb_frac: float) -> int:
    return max(1, math.floor(max_perturb_frac * attackable))


def word_importance(victim: Victim, example: EncodedExample, gold_prob: float) -> List[Tuple[int, float]]:
    """
    Attackable positions ranked by gold-probability drop under [UNK] replacement

    Args:
        victim: Queried exactly once per attackable position
        example: Example to rank
        gold_prob: Gold-class probability of the unmodified input, taken
            from the caller's correctness query

    Returns:
        (position, importance) pairs, most important first, ties by position
    """
    positions = example.attackable_positions()
    if not positions:
        return []
    variants = []
    for pos in positions:
        ids = list(example.ids)
        ids[pos] = UNK_ID
        variants.append(ids)
    probs = victim.query(variants)[:, example.label]
    scored = [(pos, gold_prob - float(p)) for pos, p in zip(positions, probs)]
    return sorted(scored, key=lambda item: (-item[1], item[0]))


def candidates(f_mlm: Encoder, ids: Sequence[int], position: int, k: int,
               allowed: Optional[Sequence[int]] = None) -> List[int]:
    """
    Top-k substitute ids at ``position`` by the MLM's unmasked logits

    The original token and special tokens are never proposed. With
    ``allowed`` the ranking is restricted to those ids.
    """
    with no_grad():
        row = f_mlm.mlm_logits(np.asarray(ids, dtype=np.int64)).data[position]
    order = np.argsort(-row, kind="stable")
    original = ids[position]
    allowed_set = set(allowed) if allowed is not None else None
    picked = []
    for token_id in order:
        token_id = int(token_id)
        if token_id < FIRST_CONTENT_ID or token_id == original:
            continue
        if allowed_set is not None and token_id not in allowed_set:
            continue
        picked.append(token_id)
        if len(picked) == k:
            break
    return picked


def greedy_attack(victim: Victim, f_mlm: Encoder, example: EncodedExample,
                  cfg: AttackConfig, example_id: int = 0) -> AttackResult:
    """Attack one example; queries equal the victim counter delta"""
    start = victim.queries
    gold = example.label
    original = tuple(example.ids)
    positions = example.attackable_positions()

    def result(correct: bool, success: bool, perturbed: List[int], final: Sequence[int]) -> AttackResult:
        pct = 100.0 * len(perturbed) / len(positions) if positions else 0.0
        return AttackResult(example_id, gold, correct, success, victim.queries - start,
                            sorted(perturbed), pct, tuple(final), original, len(positions))

    probs = victim.query_one(original)
    if int(probs.argmax()) != gold:
        return result(False, False, [], original)
    if not positions:
        return result(True, False, [], original)

    budget = perturbation_budget(len(positions), cfg.max_perturb_frac)
    current = list(original)
    gold_prob = float(probs[gold])
    perturbed: List[int] = []
    for pos, _ in word_importance(victim, example, gold_prob):
        allowed = None
        if cfg.synonyms is not None:
            allowed = cfg.synonyms.get(original[pos], ())
            if not allowed:
                continue
        proposals = candidates(f_mlm, current, pos, cfg.top_k_candidates, allowed)
        if not proposals:
            continue
        trials = []
        for token_id in proposals:
            trial = list(current)
            trial[pos] = token_id
            trials.append(trial)
        trial_probs = victim.query(trials)
        flipped = trial_probs.argmax(axis=-1) != gold
        gold_probs = trial_probs[:, gold]
        if flipped.any():
            best = int(np.flatnonzero(flipped)[np.argmin(gold_probs[flipped])])
            perturbed.append(pos)
            return result(True, True, perturbed, trials[best])
        best = int(np.argmin(gold_probs))
        if gold_probs[best] < gold_prob:
            current = trials[best]
            gold_prob = float(gold_probs[best])
            perturbed.append(pos)
            if len(perturbed) >= budget:
                break
    return result(True, False, perturbed, current)
