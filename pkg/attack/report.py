"""
Report - Robustness metrics over a seeded sample and adversarial export

Metrics:
    ori_acc          fraction of the sample classified correctly
    att_acc          fraction classified correctly and surviving the attack
    avg_queries      victim queries per attacked (originally correct) example
    avg_perturb_pct  perturbed-word percentage over successful attacks only
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np
from tqdm import tqdm

from numerics.errors import ArgumentError
from numerics.rng import Rng
from model.encoder import Encoder
from textio.dataset import write_jsonl
from textio.encoding import EncodedExample, decode
from textio.vocab import Vocab
from .greedy import AttackConfig, AttackResult, greedy_attack
from .victim import Victim

logger = logging.getLogger(__name__)


@dataclass
class RobustnessReport:
    ori_acc: float
    att_acc: float
    avg_queries: float
    avg_perturb_pct: float
    sample_size: int
    attacked: int = 0
    successes: int = 0
    results: List[AttackResult] = field(default_factory=list, repr=False)

    def to_dict(self) -> Dict:
        return {
            "ori_acc": self.ori_acc,
            "att_acc": self.att_acc,
            "avg_queries": self.avg_queries,
            "avg_perturb_pct": self.avg_perturb_pct,
            "sample_size": self.sample_size,
            "attacked": self.attacked,
            "successes": self.successes,
            "queries_averaged_over": "attacked",
            "perturb_averaged_over": "successes",
        }

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")


def summarize(results: Sequence[AttackResult]) -> RobustnessReport:
    """Aggregate per-example results into the four metrics"""
    if not results:
        raise ArgumentError("no attack results to summarize")
    n = len(results)
    attacked = [r for r in results if r.originally_correct]
    successes = [r for r in attacked if r.success]
    return RobustnessReport(
        ori_acc=len(attacked) / n,
        att_acc=(len(attacked) - len(successes)) / n,
        avg_queries=float(np.mean([r.queries for r in attacked])) if attacked else 0.0,
        avg_perturb_pct=float(np.mean([r.perturbed_pct for r in successes])) if successes else 0.0,
        sample_size=n,
        attacked=len(attacked),
        successes=len(successes),
        results=list(results),
    )


def sample_indices(population: int, size: int, seed: int) -> List[int]:
    """Seeded uniform sample without replacement, in dataset order"""
    if population < 1:
        raise ArgumentError("cannot sample from an empty dataset")
    if size > population:
        logger.warning("sample_size %d exceeds dataset size %d; attacking all", size, population)
        size = population
    return sorted(int(i) for i in Rng(seed).permutation(population)[:size])


def evaluate_robustness(victim: Victim, f_mlm: Encoder, test_set: Sequence[EncodedExample],
                        cfg: AttackConfig) -> RobustnessReport:
    """Attack a seeded sample of ``test_set`` and aggregate the results"""
    cfg.validate()
    indices = sample_indices(len(test_set), cfg.sample_size, cfg.seed)
    results = [
        greedy_attack(victim, f_mlm, test_set[i], cfg, example_id=i)
        for i in tqdm(indices, desc="attack", disable=not cfg.show_progress)
    ]
    report = summarize(results)
    logger.info(
        "attacked %d examples: ori acc %.4f, att acc %.4f, %.1f queries, %.1f%% perturbed",
        report.sample_size, report.ori_acc, report.att_acc, report.avg_queries, report.avg_perturb_pct,
    )
    return report


def export_adversarial(results: Sequence[AttackResult], vocab: Vocab,
                       path: Union[str, Path]) -> int:
    """
    Write successful adversarial texts as dataset JSONL with their original labels

    Returns:
        Number of records written
    """
    records = []
    for r in results:
        if not r.success:
            continue
        text_a, text_b = decode(vocab, r.final_ids)
        if text_b is None:
            records.append({"text": text_a, "label": r.label})
        else:
            records.append({"text_a": text_a, "text_b": text_b, "label": r.label})
    return write_jsonl(path, records)
