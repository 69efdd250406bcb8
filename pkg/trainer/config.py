"""
Training configuration
"""

from dataclasses import dataclass, field
from enum import Enum

from numerics.errors import ArgumentError
from vda.config import AugmentConfig

LAMBDA_SWEEP = (0.04, 0.1, 0.4, 1.0, 4.0)
TOY_LR = 1e-4


class RegLoss(str, Enum):
    SYM_KL = "sym_kl"
    CE_ON_LABEL = "ce_on_label"


@dataclass
class TrainConfig:
    """
    Fine-tuning settings

    Args:
        lam: Weight of the regularizer (0 disables augmentation)
        lr: Peak learning rate
        epochs: Passes over the training set
        batch_size: Examples per optimizer step
        warmup_frac: Fraction of steps spent in linear warmup
        decay: 'constant' or 'linear' after warmup
        reg_loss: sym_kl (VDA) or ce_on_label (CE on virtual logits vs gold label)
        augment: AugmentConfig for the virtual draws
        per_draw_steps: One optimizer step per virtual draw instead of one per minibatch
        seed: Shuffling and augmentation seed
        show_progress: tqdm bars over batches
    """
    lam: float = 1.0
    lr: float = TOY_LR
    epochs: int = 3
    batch_size: int = 32
    warmup_frac: float = 0.05
    decay: str = "constant"
    reg_loss: RegLoss = RegLoss.SYM_KL
    augment: AugmentConfig = field(default_factory=AugmentConfig)
    per_draw_steps: bool = False
    seed: int = 0
    show_progress: bool = False

    def __post_init__(self):
        self.reg_loss = RegLoss(self.reg_loss)

    def validate(self) -> None:
        if self.lam < 0:
            raise ArgumentError(f"lambda must be non-negative, got {self.lam}")
        if self.lr <= 0:
            raise ArgumentError(f"lr must be positive, got {self.lr}")
        if self.epochs < 1 or self.batch_size < 1:
            raise ArgumentError("epochs and batch_size must be >= 1")
        if not 0 <= self.warmup_frac < 1:
            raise ArgumentError(f"warmup_frac must be in [0, 1), got {self.warmup_frac}")
        self.augment.validate()
