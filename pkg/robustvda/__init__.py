"""Command-line pipeline for virtual data augmentation experiments."""

from .config import ConfigError, RunConfig
from .pipeline import (
    ABLATIONS,
    MissingArtifactError,
    OutputExistsError,
    cmd_ablate,
    cmd_attack,
    cmd_eval,
    cmd_pretrain,
    cmd_synth,
    cmd_train,
    resolve_train_config,
)
from .sweep import cmd_sweep, parse_values

__all__ = [
    "ConfigError", "RunConfig",
    "ABLATIONS", "MissingArtifactError", "OutputExistsError",
    "cmd_ablate", "cmd_attack", "cmd_eval", "cmd_pretrain", "cmd_synth", "cmd_train",
    "resolve_train_config", "cmd_sweep", "parse_values",
]
