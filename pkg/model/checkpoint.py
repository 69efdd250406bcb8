"""
Checkpoint - Versioned binary persistence of encoder (and head) parameters

Layout:
    4 bytes   magic b"VDA1"
    4 bytes   header length H, uint32 little-endian
    H bytes   UTF-8 JSON header: format, config, vocab_hash, step,
              has_head, params [[name, shape], ...] in payload order
    payload   each parameter as little-endian float64, in header order
"""

import json
import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from numerics.errors import VDAError
from .config import ModelConfig
from .encoder import Classifier, ClassifierHead, Encoder

logger = logging.getLogger(__name__)

MAGIC = b"VDA1"
FORMAT_VERSION = 1
_LENGTH = struct.Struct("<I")
_FLOAT = np.dtype("<f8")


class CheckpointError(VDAError):
    """Unreadable checkpoint"""


class BadMagicError(CheckpointError):
    pass


class TruncatedCheckpointError(CheckpointError):
    pass


class VocabMismatchError(CheckpointError):
    def __init__(self, checkpoint_hash: str, vocab_hash: str):
        super().__init__(
            f"vocab hash mismatch: checkpoint has {checkpoint_hash}, vocabulary has {vocab_hash}"
        )
        self.checkpoint_hash = checkpoint_hash
        self.vocab_hash = vocab_hash


@dataclass
class Checkpoint:
    """Loaded model plus header metadata"""
    encoder: Encoder
    head: Optional[ClassifierHead]
    vocab_hash: str
    step: int

    @property
    def config(self) -> ModelConfig:
        return self.encoder.config

    def classifier(self) -> Classifier:
        if self.head is None:
            raise CheckpointError("checkpoint holds no classification head")
        return Classifier(self.encoder, self.head)


def save_checkpoint(path: Union[str, Path], encoder: Encoder, head: Optional[ClassifierHead] = None,
                    vocab_hash: str = "", step: int = 0) -> None:
    params = encoder.parameters() + (head.parameters() if head is not None else [])
    header = {
        "format": FORMAT_VERSION,
        "config": encoder.config.to_dict(),
        "vocab_hash": vocab_hash,
        "step": int(step),
        "has_head": head is not None,
        "params": [[p.name, list(p.shape)] for p in params],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_LENGTH.pack(len(header_bytes)))
        fh.write(header_bytes)
        for p in params:
            fh.write(np.ascontiguousarray(p.data, dtype=_FLOAT).tobytes())
    logger.debug("saved %d parameters to %s", len(params), path)


def load_checkpoint(path: Union[str, Path], vocab_hash: Optional[str] = None) -> Checkpoint:
    """
    Read a checkpoint written by save_checkpoint

    Args:
        path: File to read
        vocab_hash: When given, must equal the hash recorded at save time

    Raises:
        BadMagicError, TruncatedCheckpointError, VocabMismatchError, CheckpointError
    """
    blob = Path(path).read_bytes()
    if blob[:len(MAGIC)] != MAGIC:
        raise BadMagicError(f"bad magic: expected {MAGIC!r}, found {blob[:len(MAGIC)]!r}")
    offset = len(MAGIC)
    if len(blob) < offset + _LENGTH.size:
        raise TruncatedCheckpointError("truncated checkpoint: missing header length")
    (header_len,) = _LENGTH.unpack_from(blob, offset)
    offset += _LENGTH.size
    if len(blob) < offset + header_len:
        raise TruncatedCheckpointError("truncated checkpoint: header cut short")
    try:
        header = json.loads(blob[offset:offset + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"corrupt checkpoint header: {exc}") from None
    offset += header_len
    if header.get("format") != FORMAT_VERSION:
        raise CheckpointError(f"unsupported checkpoint format {header.get('format')!r}")

    if vocab_hash is not None and header["vocab_hash"] != vocab_hash:
        raise VocabMismatchError(header["vocab_hash"], vocab_hash)

    config = ModelConfig.from_dict(header["config"])
    encoder = Encoder(config)
    head = ClassifierHead(config) if header["has_head"] else None
    params = encoder.parameters() + (head.parameters() if head is not None else [])
    recorded: List = header["params"]
    if [name for name, _ in recorded] != [p.name for p in params]:
        raise CheckpointError("parameter order in header does not match the model layout")

    for p, (name, shape) in zip(params, recorded):
        if tuple(shape) != p.shape:
            raise CheckpointError(f"shape mismatch for {name}: {tuple(shape)} vs {p.shape}")
        nbytes = p.size * _FLOAT.itemsize
        if len(blob) < offset + nbytes:
            raise TruncatedCheckpointError(f"truncated checkpoint: payload ends inside {name}")
        p.data[...] = np.frombuffer(blob, dtype=_FLOAT, count=p.size, offset=offset).reshape(p.shape)
        offset += nbytes
    if offset != len(blob):
        raise CheckpointError(f"{len(blob) - offset} trailing bytes after payload")
    return Checkpoint(encoder, head, header["vocab_hash"], header["step"])
