"""
Shared experiment runner for the robustvda benchmarks
Prepares one corpus and MLM per seed, then trains and attacks named variants
"""

import logging
import math
import statistics
import sys
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from robustvda.config import RunConfig
from robustvda.pipeline import (
    cmd_pretrain,
    cmd_synth,
    mlm_path,
    resolve_train_config,
    train_and_attack,
)

logger = logging.getLogger(__name__)

OUTPUT_DIR = Path(os.path.dirname(os.path.abspath(__file__))) / "benchmark_output"
SEEDS = (0, 1, 2, 3, 4)


@dataclass
class RunOutcome:
    """Results from one train + attack run"""
    name: str
    seed: int
    test_accuracy: float
    ori_acc: float
    att_acc: float
    avg_queries: float
    avg_perturb_pct: float
    best_epoch: int
    time_taken: float
    settings: Dict[str, object] = field(default_factory=dict)

    def row(self) -> str:
        return (f"{self.name:<14} seed {self.seed}: test acc {self.test_accuracy:.4f}  "
                f"ori {self.ori_acc:.4f}  att {self.att_acc:.4f}  "
                f"queries {self.avg_queries:6.1f}  perturb {self.avg_perturb_pct:5.1f}%  "
                f"({self.time_taken:.1f}s)")


class ExperimentRunner:
    """Seeded corpora, pretrained MLMs and fine-tuning runs under one work directory"""

    def __init__(self, base: Optional[RunConfig] = None, work_dir: Path = OUTPUT_DIR):
        self.base = base or RunConfig()
        self.work_dir = Path(work_dir)
        self.outcomes: List[RunOutcome] = []

    def seed_config(self, seed: int, **changes) -> RunConfig:
        root = self.work_dir / f"seed-{seed}"
        cfg = self.base.copy(seed=seed, data_dir=str(root / "data"), out_dir=str(root / "runs"))
        for key, value in changes.items():
            cfg.set(key, str(value))
        return cfg

    def prepare(self, cfg: RunConfig) -> float:
        """Synthesize and pretrain unless already done; returns seconds spent"""
        start = time.time()
        if not (cfg.data_path / "train.jsonl").exists():
            cmd_synth(cfg)
        if not mlm_path(cfg).exists():
            cmd_pretrain(cfg)
        return time.time() - start

    def run(self, cfg: RunConfig, vda: str = "on", ablation: Optional[str] = None,
            name: Optional[str] = None) -> RunOutcome:
        self.prepare(cfg)
        resolved, default_name = resolve_train_config(cfg, vda, ablation)
        name = name or default_name
        start = time.time()
        outcome = train_and_attack(resolved, name)
        elapsed = time.time() - start
        summary, report = outcome["summary"], outcome["report"]
        result = RunOutcome(
            name=name,
            seed=cfg.seed,
            test_accuracy=summary["test_accuracy"],
            ori_acc=report["ori_acc"],
            att_acc=report["att_acc"],
            avg_queries=report["avg_queries"],
            avg_perturb_pct=report["avg_perturb_pct"],
            best_epoch=summary["best_epoch"],
            time_taken=elapsed,
            settings={"sigma": resolved.sigma, "k": resolved.k, "lambda": resolved.lam,
                      "mode": resolved.mode, "reg_loss": resolved.reg_loss},
        )
        self.outcomes.append(result)
        print(result.row())
        return result


def median_of(outcomes: Sequence[RunOutcome], attr: str) -> float:
    return statistics.median(getattr(o, attr) for o in outcomes)


def all_finite(values: Sequence[float]) -> bool:
    return all(math.isfinite(v) for v in values)


def save_report(lines: Sequence[str], filename: str) -> Path:
    """Write a text report next to the benchmark scripts"""
    OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
    path = OUTPUT_DIR / filename
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"\nDetailed report saved to: {path}")
    return path


def configure_logging() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
