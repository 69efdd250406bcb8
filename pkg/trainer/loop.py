"""
Loop - Regularized fine-tuning: minimise L_c + lambda * L_reg over shuffled minibatches

Each minibatch gets one clean forward pass and, when lambda > 0, k virtual
draws built from the frozen MLM's substitution probabilities. By default
the k regularizer terms are averaged and a single optimizer step is taken
on the combined loss; per_draw_steps instead takes one step per draw.
"""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from numerics import ops
from numerics.errors import ArgumentError, DataError, NumericError
from numerics.optim import Adam, WarmupSchedule, adam_step
from numerics.rng import Rng
from numerics.tensor import Tensor, backward
from model.encoder import Classifier, Encoder, predict_proba
from textio.encoding import EncodedExample, pad_batch
from vda.augment import augment, draw_virtual, mixture_matrix
from vda.distributions import substitution_distribution
from vda.virtual import VirtualBatch
from .config import TrainConfig
from .losses import classification_loss, regularization_loss

logger = logging.getLogger(__name__)

EpochHook = Callable[[Classifier, int], Optional[float]]


@dataclass
class EpochMetrics:
    """One line of the metrics log"""
    epoch: int
    train_loss: float
    loss_c: float
    loss_reg: float
    dev_accuracy: float
    dev_attack_accuracy: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            "epoch": self.epoch,
            "train_loss": self.train_loss,
            "L_c": self.loss_c,
            "L_reg": self.loss_reg,
            "dev_accuracy": self.dev_accuracy,
            "dev_attack_accuracy": self.dev_attack_accuracy,
        }


@dataclass
class StepRecord:
    epoch: int
    step: int
    loss_c: float
    loss_reg: float
    train_loss: float
    lr: float


def evaluate(model: Classifier, dataset: Sequence[EncodedExample], batch_size: int = 256) -> float:
    """Fraction of examples whose argmax prediction equals the label"""
    if not dataset:
        raise DataError("cannot evaluate on an empty dataset")
    probs = predict_proba(model, [ex.ids for ex in dataset], batch_size)
    labels = np.array([ex.label for ex in dataset])
    return float((probs.argmax(axis=-1) == labels).mean())


class Trainer:
    """
    Fine-tunes a classifier with optional virtual data augmentation

    Args:
        model: Classifier f, updated in place
        f_mlm: Frozen MLM encoder (never updated)
        cfg: TrainConfig
        metrics_path: Optional JSONL file receiving one EpochMetrics object per epoch
        epoch_hook: Called after each epoch; may return a dev attack accuracy
    """

    def __init__(self, model: Classifier, f_mlm: Encoder, cfg: TrainConfig,
                 metrics_path: Optional[Union[str, Path]] = None,
                 epoch_hook: Optional[EpochHook] = None):
        cfg.validate()
        if f_mlm is model.encoder:
            raise ArgumentError("f_mlm must be a separate copy of the encoder")
        self.model = model
        self.f_mlm = f_mlm
        self.cfg = cfg
        self.metrics_path = Path(metrics_path) if metrics_path is not None else None
        self.epoch_hook = epoch_hook
        self.shuffle_rng, self.augment_rng = Rng(cfg.seed).split(2)
        self.steps: List[StepRecord] = []
        self.optimizer: Optional[Adam] = None

    # ------------------------------------------------------------ losses

    def batch_losses(self, ids: np.ndarray, mask: np.ndarray, labels: np.ndarray,
                     virtual: Optional[Sequence[VirtualBatch]] = None,
                     lam: Optional[float] = None) -> Tuple[Tensor, Tensor, Optional[Tensor]]:
        """(L_c + lambda * L_reg, L_c, L_reg) for one batch and fixed virtual draws"""
        lam = self.cfg.lam if lam is None else lam
        logits = self.model.classify_from_ids(ids, mask)
        loss_c = classification_loss(logits, labels)
        if lam == 0 or not virtual:
            return loss_c, loss_c, None
        virtual_logits = [self.model.classify_from_embeddings(vb.embeddings, mask) for vb in virtual]
        loss_reg = regularization_loss(logits, virtual_logits, self.cfg.reg_loss, labels)
        return loss_c + ops.scale(loss_reg, lam), loss_c, loss_reg

    def _check_finite(self, total: Tensor, loss_c: Tensor, loss_reg: Optional[Tensor], epoch: int) -> None:
        if not math.isfinite(total.item()):
            reg = loss_reg.item() if loss_reg is not None else 0.0
            raise NumericError(
                f"non-finite loss at epoch {epoch}, step {len(self.steps)}: "
                f"L_c={loss_c.item()!r} L_reg={reg!r} lambda={self.cfg.lam}"
            )

    def _apply(self, total: Tensor, loss_c: Tensor, loss_reg: Optional[Tensor], epoch: int) -> StepRecord:
        self._check_finite(total, loss_c, loss_reg, epoch)
        backward(total)
        lr = adam_step(self.optimizer)
        record = StepRecord(
            epoch, len(self.steps), loss_c.item(),
            loss_reg.item() if loss_reg is not None else 0.0, total.item(), lr,
        )
        self.steps.append(record)
        return record

    # ------------------------------------------------------------ steps

    def train_batch(self, batch: Sequence[EncodedExample], epoch: int) -> List[StepRecord]:
        ids, mask = pad_batch([ex.ids for ex in batch])
        labels = np.array([ex.label for ex in batch], dtype=np.int64)
        aug = self.cfg.augment
        if self.cfg.lam == 0:
            return [self._apply(*self.batch_losses(ids, mask, labels), epoch)]

        if not self.cfg.per_draw_steps:
            virtual = augment(self.f_mlm, ids, aug, self.augment_rng, self.model.encoder, mask)
            return [self._apply(*self.batch_losses(ids, mask, labels, virtual), epoch)]

        # One step per draw: rebuild each draw against the current M_E.
        clean = substitution_distribution(self.f_mlm, ids, mask)
        records = []
        for j in range(aug.k):
            noise = self.augment_rng.gaussian(clean.probs.size, aug.sigma).reshape(clean.probs.shape)
            table = mixture_matrix(aug, self.f_mlm, self.model.encoder)
            draw = draw_virtual(clean, noise, ids, aug, self.augment_rng, table,
                                self.model.encoder.positions(ids.shape[1]), j)
            records.append(self._apply(*self.batch_losses(ids, mask, labels, [draw]), epoch))
        return records

    # ------------------------------------------------------------ epochs

    def fit(self, train_set: Sequence[EncodedExample],
            dev_set: Sequence[EncodedExample]) -> Tuple[Classifier, List[EpochMetrics]]:
        """Run all epochs; restores and returns the best-dev-accuracy parameters"""
        if not train_set:
            raise DataError("empty training set")
        if not dev_set:
            raise DataError("empty dev set")
        cfg = self.cfg
        batches_per_epoch = math.ceil(len(train_set) / cfg.batch_size)
        steps_per_batch = cfg.augment.k if (cfg.per_draw_steps and cfg.lam > 0) else 1
        schedule = WarmupSchedule(cfg.lr, cfg.epochs * batches_per_epoch * steps_per_batch,
                                  cfg.warmup_frac, cfg.decay)
        self.optimizer = Adam(self.model.parameters(), schedule=schedule)
        if self.metrics_path is not None:
            self.metrics_path.write_text("", encoding="utf-8")

        history: List[EpochMetrics] = []
        best_state, best_acc = None, -1.0
        for epoch in range(1, cfg.epochs + 1):
            order = self.shuffle_rng.permutation(len(train_set))
            records: List[StepRecord] = []
            starts = range(0, len(train_set), cfg.batch_size)
            for start in tqdm(starts, desc=f"epoch {epoch}", disable=not cfg.show_progress):
                batch = [train_set[i] for i in order[start:start + cfg.batch_size]]
                records.extend(self.train_batch(batch, epoch))

            dev_acc = evaluate(self.model, dev_set)
            attack_acc = self.epoch_hook(self.model, epoch) if self.epoch_hook else None
            metrics = EpochMetrics(
                epoch,
                float(np.mean([r.train_loss for r in records])),
                float(np.mean([r.loss_c for r in records])),
                float(np.mean([r.loss_reg for r in records])),
                dev_acc,
                attack_acc,
            )
            history.append(metrics)
            self._log_epoch(metrics)
            if dev_acc > best_acc:
                best_acc, best_state = dev_acc, self.model.state_dict()

        self.model.load_state_dict(best_state)
        return self.model, history

    def _log_epoch(self, metrics: EpochMetrics) -> None:
        logger.info(
            "epoch %d: loss %.4f (L_c %.4f, L_reg %.4f) dev acc %.4f%s",
            metrics.epoch, metrics.train_loss, metrics.loss_c, metrics.loss_reg,
            metrics.dev_accuracy,
            "" if metrics.dev_attack_accuracy is None else f" dev att acc {metrics.dev_attack_accuracy:.4f}",
        )
        if self.metrics_path is not None:
            with open(self.metrics_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(metrics.to_dict()) + "\n")


def train(f: Classifier, f_mlm: Encoder, train_set: Sequence[EncodedExample],
          dev_set: Sequence[EncodedExample], cfg: TrainConfig,
          metrics_path: Optional[Union[str, Path]] = None,
          epoch_hook: Optional[EpochHook] = None) -> Tuple[Classifier, List[EpochMetrics]]:
    """Fine-tune ``f``; see Trainer"""
    return Trainer(f, f_mlm, cfg, metrics_path, epoch_hook).fit(train_set, dev_set)


def best_epoch(history: Sequence[EpochMetrics]) -> EpochMetrics:
    """First epoch reaching the highest dev accuracy"""
    return max(history, key=lambda m: (m.dev_accuracy, -m.epoch))


def write_summary(path: Union[str, Path], history: Sequence[EpochMetrics],
                  test_accuracy: Optional[float] = None) -> Dict:
    """Append the closing summary object to a metrics file"""
    best = best_epoch(history)
    summary = {
        "summary": True,
        "best_epoch": best.epoch,
        "best_dev_accuracy": best.dev_accuracy,
        "test_accuracy": test_accuracy,
    }
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(summary) + "\n")
    return summary
