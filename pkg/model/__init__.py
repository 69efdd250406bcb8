"""
Model: tiny transformer encoder, tied MLM head, classifier head and checkpoints
"""

from .config import ModelConfig
from .encoder import Classifier, ClassifierHead, Encoder, TransformerBlock, predict_proba
from .checkpoint import (
    BadMagicError,
    Checkpoint,
    CheckpointError,
    TruncatedCheckpointError,
    VocabMismatchError,
    load_checkpoint,
    save_checkpoint,
)
from .pretrain import (
    PILOT_RECOVERY_THRESHOLD,
    mask_tokens,
    mlm_loss,
    mlm_token_recovery,
    original_token_ranks,
    pilot_passes,
    pretrain_mlm,
)

__all__ = [
    'ModelConfig',
    'Classifier', 'ClassifierHead', 'Encoder', 'TransformerBlock', 'predict_proba',
    'BadMagicError', 'Checkpoint', 'CheckpointError', 'TruncatedCheckpointError',
    'VocabMismatchError', 'load_checkpoint', 'save_checkpoint',
    'PILOT_RECOVERY_THRESHOLD', 'mask_tokens', 'mlm_loss', 'mlm_token_recovery', 'original_token_ranks',
    'pilot_passes', 'pretrain_mlm',
]
