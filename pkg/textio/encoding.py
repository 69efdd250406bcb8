"""
Encoding - Token-id sequences for single sentences and sentence pairs
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from numerics.errors import ArgumentError
from .vocab import CLS_ID, MASK_ID, PAD_ID, SEP_ID, Vocab, tokenize

MIN_MAX_LEN = 3


@dataclass(frozen=True)
class EncodedExample:
    """
    One tokenized example

    ids start with [CLS]; a pair is laid out as [CLS] a... [SEP] b...
    attackable_range is a half-open span: the whole sentence for single
    inputs, only the second sentence for pairs.
    """
    ids: Tuple[int, ...]
    label: int
    segment_b_start: Optional[int] = None
    attackable_range: Tuple[int, int] = (1, 1)

    @property
    def is_pair(self) -> bool:
        return self.segment_b_start is not None

    def __len__(self) -> int:
        return len(self.ids)

    def attackable_positions(self) -> List[int]:
        start, end = self.attackable_range
        return [i for i in range(start, end) if self.ids[i] not in (PAD_ID, CLS_ID, SEP_ID, MASK_ID)]

    def with_ids(self, ids: Sequence[int]) -> "EncodedExample":
        """Same layout and label, different tokens (used by word substitutions)"""
        return EncodedExample(tuple(ids), self.label, self.segment_b_start, self.attackable_range)


def _truncate_pair(a: List[int], b: List[int], budget: int) -> Tuple[List[int], List[int]]:
    """Drop tokens from the longer side until both fit in ``budget``"""
    a, b = list(a), list(b)
    while len(a) + len(b) > budget:
        if len(a) >= len(b) and a:
            a.pop()
        else:
            b.pop()
    return a, b


def encode(vocab: Vocab, text_a: str, text_b: Optional[str] = None,
           label: int = 0, max_len: int = 32) -> EncodedExample:
    """
    [CLS] a... ([SEP] b...) truncated to max_len; unknown words map to [UNK]
    """
    if max_len < MIN_MAX_LEN:
        raise ArgumentError(f"max_len must be >= {MIN_MAX_LEN}, got {max_len}")
    if label < 0:
        raise ArgumentError(f"label must be non-negative, got {label}")
    a = [vocab.id(w) for w in tokenize(text_a)]
    if text_b is None:
        a = a[:max_len - 1]
        ids = [CLS_ID] + a
        return EncodedExample(tuple(ids), label, None, (1, len(ids)))

    b = [vocab.id(w) for w in tokenize(text_b)]
    a, b = _truncate_pair(a, b, max_len - 2)
    ids = [CLS_ID] + a + [SEP_ID] + b
    b_start = len(a) + 2
    return EncodedExample(tuple(ids), label, b_start, (b_start, len(ids)))


def decode(vocab: Vocab, ids: Sequence[int]) -> Tuple[str, Optional[str]]:
    """Inverse of encode up to lowercasing and whitespace; returns (text_a, text_b)"""
    segments: List[List[str]] = [[]]
    for token_id in ids:
        if token_id in (CLS_ID, PAD_ID):
            continue
        if token_id == SEP_ID:
            segments.append([])
            continue
        segments[-1].append(vocab.token(token_id))
    text_a = " ".join(segments[0])
    text_b = " ".join(segments[1]) if len(segments) > 1 else None
    return text_a, text_b


def pad_batch(sequences: Sequence[Sequence[int]], length: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Right-pad id sequences with [PAD]

    Returns:
        (ids [B, L] int64, mask [B, L] bool marking real tokens)
    """
    if not sequences:
        raise ArgumentError("cannot pad an empty batch")
    width = length if length is not None else max(len(s) for s in sequences)
    ids = np.full((len(sequences), width), PAD_ID, dtype=np.int64)
    mask = np.zeros((len(sequences), width), dtype=bool)
    for row, seq in enumerate(sequences):
        if len(seq) > width:
            raise ArgumentError(f"sequence of length {len(seq)} exceeds pad width {width}")
        ids[row, :len(seq)] = seq
        mask[row, :len(seq)] = True
    return ids, mask
