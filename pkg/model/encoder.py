"""
Encoder - Tiny post-norm transformer with a tied MLM head and a [CLS] classifier

One encoder architecture serves both roles: the frozen masked language
model that scores substitutions, and the fine-tuned classifier. The
classifier reads embeddings through the same path whether they come from
a token lookup or from a virtual mixture, which is what lets augmented
embeddings replace real ones.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from numerics import ops
from numerics.errors import ArgumentError
from numerics.rng import Rng
from numerics.tensor import Tensor, no_grad
from textio.encoding import pad_batch
from .config import ModelConfig

logger = logging.getLogger(__name__)

MASK_PENALTY = -1e9


def _param(shape: Tuple[int, ...], name: str, rng: Optional[Rng], std: float,
           fill: Optional[float] = None) -> Tensor:
    if fill is not None:
        data = np.full(shape, fill, dtype=np.float64)
    elif rng is None:
        data = np.zeros(shape, dtype=np.float64)
    else:
        data = std * rng.normal(int(np.prod(shape))).reshape(shape)
    return Tensor(data, requires_grad=True, name=name)


def as_id_batch(ids) -> Tuple[np.ndarray, bool]:
    """(ids as [B, L] int64, whether a batch axis was added)"""
    arr = np.asarray(ids, dtype=np.int64)
    if arr.ndim == 1:
        return arr[None, :], True
    if arr.ndim != 2:
        raise ArgumentError(f"ids must be 1-D or 2-D, got shape {arr.shape}")
    return arr, False


class TransformerBlock:
    """Self-attention and ReLU feed-forward, each followed by residual + layer norm"""

    def __init__(self, config: ModelConfig, index: int, rng: Optional[Rng] = None):
        d, f, std = config.hidden_dim, config.ffn_dim, config.init_std
        self.heads = config.heads
        self.head_dim = config.head_dim
        p = f"block{index}."
        self.wq = _param((d, d), p + "wq", rng, std)
        self.bq = _param((d,), p + "bq", None, std)
        self.wk = _param((d, d), p + "wk", rng, std)
        self.bk = _param((d,), p + "bk", None, std)
        self.wv = _param((d, d), p + "wv", rng, std)
        self.bv = _param((d,), p + "bv", None, std)
        self.wo = _param((d, d), p + "wo", rng, std)
        self.bo = _param((d,), p + "bo", None, std)
        self.ln1_gamma = _param((d,), p + "ln1_gamma", None, std, fill=1.0)
        self.ln1_beta = _param((d,), p + "ln1_beta", None, std)
        self.w1 = _param((d, f), p + "w1", rng, std)
        self.b1 = _param((f,), p + "b1", None, std)
        self.w2 = _param((f, d), p + "w2", rng, std)
        self.b2 = _param((d,), p + "b2", None, std)
        self.ln2_gamma = _param((d,), p + "ln2_gamma", None, std, fill=1.0)
        self.ln2_beta = _param((d,), p + "ln2_beta", None, std)

    def parameters(self) -> List[Tensor]:
        return [self.wq, self.bq, self.wk, self.bk, self.wv, self.bv, self.wo, self.bo,
                self.ln1_gamma, self.ln1_beta, self.w1, self.b1, self.w2, self.b2,
                self.ln2_gamma, self.ln2_beta]

    def _split_heads(self, x: Tensor, batch: int, length: int) -> Tensor:
        return x.reshape(batch, length, self.heads, self.head_dim).transpose(0, 2, 1, 3)

    def __call__(self, x: Tensor, mask_add: Tensor) -> Tensor:
        batch, length, width = x.shape
        q = self._split_heads(x @ self.wq + self.bq, batch, length)
        k = self._split_heads(x @ self.wk + self.bk, batch, length)
        v = self._split_heads(x @ self.wv + self.bv, batch, length)

        scores = ops.scale(q @ k.transpose(0, 1, 3, 2), 1.0 / math.sqrt(self.head_dim))
        attn = ops.softmax(scores + mask_add)
        context = (attn @ v).transpose(0, 2, 1, 3).reshape(batch, length, width)

        x = ops.layer_norm(x + (context @ self.wo + self.bo), self.ln1_gamma, self.ln1_beta)
        hidden = ops.relu(x @ self.w1 + self.b1)
        return ops.layer_norm(x + (hidden @ self.w2 + self.b2), self.ln2_gamma, self.ln2_beta)


class Encoder:
    """
    Token + positional embeddings, transformer blocks and the tied MLM projection

    Args:
        config: ModelConfig
        rng: Initialisation stream; None leaves weights at zero (for loading)
    """

    def __init__(self, config: ModelConfig, rng: Optional[Rng] = None):
        config.validate()
        self.config = config
        std = config.init_std
        self.token_embeddings = _param((config.vocab_size, config.hidden_dim), "token_embeddings", rng, std)
        self.position_embeddings = _param((config.max_len, config.hidden_dim), "position_embeddings", rng, std)
        self.blocks = [TransformerBlock(config, i, rng) for i in range(config.layers)]
        self.mlm_bias = _param((config.vocab_size,), "mlm_bias", None, std)
        self.forward_count = 0

    def parameters(self) -> List[Tensor]:
        """All parameters in checkpoint order"""
        params = [self.token_embeddings, self.position_embeddings]
        for block in self.blocks:
            params.extend(block.parameters())
        params.append(self.mlm_bias)
        return params

    def _check_length(self, length: int) -> None:
        if length > self.config.max_len:
            raise ArgumentError(f"sequence length {length} exceeds max_len {self.config.max_len}")

    def positions(self, length: int) -> Tensor:
        self._check_length(length)
        return self.position_embeddings[:length]

    def token_lookup(self, ids) -> Tensor:
        """M_E rows for ids, without positions"""
        return ops.embedding_lookup(self.token_embeddings, ids)

    def forward_embeddings(self, ids) -> Tensor:
        """Token + positional embeddings: [L, d] for 1-D ids, [B, L, d] for a batch"""
        batch, squeeze = as_id_batch(ids)
        self._check_length(batch.shape[1])
        out = self.token_lookup(batch) + self.positions(batch.shape[1])
        return out[0] if squeeze else out

    def encode(self, embeddings: Tensor, mask: Optional[np.ndarray] = None) -> Tensor:
        """
        Run the transformer over [B, L, d] embeddings

        Args:
            embeddings: Input embeddings (token + position)
            mask: [B, L] bool, True on real tokens; None means no padding
        """
        if embeddings.ndim != 3 or embeddings.shape[-1] != self.config.hidden_dim:
            raise ArgumentError(
                f"expected [B, L, {self.config.hidden_dim}] embeddings, got {embeddings.shape}"
            )
        batch, length, _ = embeddings.shape
        self._check_length(length)
        if mask is None:
            mask = np.ones((batch, length), dtype=bool)
        mask_add = Tensor(np.where(mask, 0.0, MASK_PENALTY)[:, None, None, :])
        self.forward_count += 1
        x = embeddings
        for block in self.blocks:
            x = block(x, mask_add)
        return x

    def mlm_logits_from_hidden(self, hidden: Tensor) -> Tensor:
        return hidden @ self.token_embeddings.transpose() + self.mlm_bias

    def mlm_logits(self, ids, mask: Optional[np.ndarray] = None) -> Tensor:
        """Per-position vocabulary logits over the unmasked input: [L, V] or [B, L, V]"""
        batch, squeeze = as_id_batch(ids)
        logits = self.mlm_logits_from_hidden(self.encode(self.forward_embeddings(batch), mask))
        return logits[0] if squeeze else logits

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {p.name: p.data.copy() for p in self.parameters()}

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        for p in self.parameters():
            if p.name not in state:
                raise ArgumentError(f"missing parameter {p.name}")
            if state[p.name].shape != p.shape:
                raise ArgumentError(f"shape mismatch for {p.name}: {state[p.name].shape} vs {p.shape}")
            p.data[...] = state[p.name]

    def clone(self) -> "Encoder":
        """Independent copy with separate storage"""
        other = Encoder(self.config)
        other.load_state_dict(self.state_dict())
        return other


class ClassifierHead:
    """dense -> ReLU -> dense over the [CLS] representation"""

    def __init__(self, config: ModelConfig, rng: Optional[Rng] = None):
        d, c, std = config.hidden_dim, config.num_classes, config.init_std
        self.dense = _param((d, d), "head.dense", rng, std)
        self.dense_bias = _param((d,), "head.dense_bias", None, std)
        self.out = _param((d, c), "head.out", rng, std)
        self.out_bias = _param((c,), "head.out_bias", None, std)

    def parameters(self) -> List[Tensor]:
        return [self.dense, self.dense_bias, self.out, self.out_bias]

    def __call__(self, cls_repr: Tensor) -> Tensor:
        return ops.relu(cls_repr @ self.dense + self.dense_bias) @ self.out + self.out_bias


class Classifier:
    """
    Encoder plus classification head: f(E; theta)

    Args:
        encoder: Shared encoder (its M_E may feed the virtual mixture)
        head: ClassifierHead
    """

    def __init__(self, encoder: Encoder, head: ClassifierHead):
        self.encoder = encoder
        self.head = head

    @property
    def config(self) -> ModelConfig:
        return self.encoder.config

    def parameters(self) -> List[Tensor]:
        """Parameters on the classification path; the MLM bias is left to state_dict"""
        encoder = [p for p in self.encoder.parameters() if p is not self.encoder.mlm_bias]
        return encoder + self.head.parameters()

    def classify_from_embeddings(self, embeddings: Tensor, mask: Optional[np.ndarray] = None) -> Tensor:
        """Logits from the [CLS] output position: [C] for [L, d], [B, C] for [B, L, d]"""
        squeeze = embeddings.ndim == 2
        if squeeze:
            embeddings = embeddings.reshape(1, *embeddings.shape)
        hidden = self.encoder.encode(embeddings, mask)
        logits = self.head(hidden[:, 0, :])
        return logits[0] if squeeze else logits

    def classify_from_ids(self, ids, mask: Optional[np.ndarray] = None) -> Tensor:
        return self.classify_from_embeddings(self.encoder.forward_embeddings(ids), mask)

    def state_dict(self) -> Dict[str, np.ndarray]:
        state = self.encoder.state_dict()
        state.update({p.name: p.data.copy() for p in self.head.parameters()})
        return state

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        self.encoder.load_state_dict(state)
        for p in self.head.parameters():
            p.data[...] = state[p.name]

    def clone(self) -> "Classifier":
        other = Classifier(Encoder(self.config), ClassifierHead(self.config))
        other.load_state_dict(self.state_dict())
        return other


def predict_proba(model: Classifier, sequences: Sequence[Sequence[int]], batch_size: int = 256) -> np.ndarray:
    """Class probabilities for id sequences, padded in chunks, no tape"""
    out = []
    with no_grad():
        for start in range(0, len(sequences), batch_size):
            ids, mask = pad_batch(sequences[start:start + batch_size])
            out.append(ops.softmax(model.classify_from_ids(ids, mask)).data)
    return np.concatenate(out, axis=0) if out else np.zeros((0, model.config.num_classes))
