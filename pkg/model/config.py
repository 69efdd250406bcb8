"""
Model configuration
"""

from dataclasses import asdict, dataclass
from typing import Dict

from numerics.errors import ArgumentError


@dataclass
class ModelConfig:
    """
    Shape of the tiny transformer encoder

    Args:
        vocab_size: V, rows of the token embedding matrix
        num_classes: Output width of the classification head
        layers: Transformer blocks
        hidden_dim: d
        heads: Attention heads (must divide hidden_dim)
        ffn_dim: Feed-forward inner width
        max_len: Longest input sequence
        init_std: Standard deviation of the normal weight init
    """
    vocab_size: int
    num_classes: int = 2
    layers: int = 2
    hidden_dim: int = 64
    heads: int = 2
    ffn_dim: int = 128
    max_len: int = 32
    init_std: float = 0.02

    def validate(self) -> None:
        for name in ("vocab_size", "num_classes", "layers", "hidden_dim", "heads", "ffn_dim", "max_len"):
            if getattr(self, name) < 1:
                raise ArgumentError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.hidden_dim % self.heads:
            raise ArgumentError(f"hidden_dim {self.hidden_dim} not divisible by heads {self.heads}")
        if self.init_std <= 0:
            raise ArgumentError(f"init_std must be positive, got {self.init_std}")

    @property
    def head_dim(self) -> int:
        return self.hidden_dim // self.heads

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "ModelConfig":
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        return cls(**known)
