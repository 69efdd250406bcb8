"""
Trainer: fine-tuning with the virtual-data regularizer
"""

from .config import LAMBDA_SWEEP, TOY_LR, RegLoss, TrainConfig
from .losses import classification_loss, regularization_loss
from .loop import (
    EpochMetrics,
    StepRecord,
    Trainer,
    best_epoch,
    evaluate,
    train,
    write_summary,
)

__all__ = [
    'LAMBDA_SWEEP', 'TOY_LR', 'RegLoss', 'TrainConfig',
    'classification_loss', 'regularization_loss',
    'EpochMetrics', 'StepRecord', 'Trainer', 'best_epoch', 'evaluate', 'train', 'write_summary',
]
