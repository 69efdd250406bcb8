"""
Vocab - Word-level vocabulary with fixed special tokens
"""

import hashlib
import re
from collections import Counter
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from numerics.errors import ArgumentError, DataError

SPECIAL_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")
PAD_ID, UNK_ID, CLS_ID, SEP_ID, MASK_ID = range(len(SPECIAL_TOKENS))
MIN_VOCAB_SIZE = len(SPECIAL_TOKENS) + 1

# Words are runs of letters/digits with an optional inner apostrophe;
# everything else is a separator, so punctuation never becomes a token.
_WORD_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)?")


def tokenize(text: str) -> List[str]:
    """Lowercase, drop punctuation, split into words"""
    return _WORD_RE.findall(text.lower())


class Vocab:
    """
    Bijection between tokens and ids; specials occupy ids 0-4

    Args:
        tokens: Full token list, specials first
    """

    def __init__(self, tokens: Iterable[str]):
        self.tokens: List[str] = list(tokens)
        if tuple(self.tokens[:len(SPECIAL_TOKENS)]) != SPECIAL_TOKENS:
            raise DataError("vocabulary must start with the special tokens")
        if len(self.tokens) < MIN_VOCAB_SIZE:
            raise DataError(f"vocabulary needs at least {MIN_VOCAB_SIZE} tokens")
        self.index: Dict[str, int] = {}
        for i, tok in enumerate(self.tokens):
            if tok in self.index:
                raise DataError(f"duplicate token {tok!r}")
            self.index[tok] = i
        self.specials: Dict[str, int] = {tok: i for i, tok in enumerate(SPECIAL_TOKENS)}

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def id(self, token: str) -> int:
        return self.index.get(token, UNK_ID)

    def token(self, token_id: int) -> str:
        return self.tokens[token_id]

    @staticmethod
    def is_special(token_id: int) -> bool:
        return 0 <= token_id < len(SPECIAL_TOKENS)

    def fingerprint(self) -> str:
        """SHA-256 over the ordered token list"""
        return hashlib.sha256("\n".join(self.tokens).encode("utf-8")).hexdigest()

    def save(self, path: Union[str, Path]) -> None:
        """One token per line; line number is the id"""
        Path(path).write_text("\n".join(self.tokens) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Vocab":
        lines = Path(path).read_text(encoding="utf-8").split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        return cls(lines)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocab) and self.tokens == other.tokens

    def __repr__(self) -> str:
        return f"Vocab(size={len(self)})"


def build_vocab(corpus: Iterable[str], max_size: int = 1000, min_freq: int = 1,
                counts: Optional[Counter] = None) -> Vocab:
    """
    Frequency-sorted vocabulary, ties broken lexicographically

    Args:
        corpus: Stream of raw texts
        max_size: Total size including the special tokens
        min_freq: Minimum count for a word to get its own id
        counts: Optional precomputed word counts (corpus is then ignored)
    """
    if max_size < MIN_VOCAB_SIZE:
        raise ArgumentError(f"max_size must be >= {MIN_VOCAB_SIZE}, got {max_size}")
    if counts is None:
        counts = Counter()
        for text in corpus:
            counts.update(tokenize(text))
    for special in SPECIAL_TOKENS:
        counts.pop(special, None)
    if not counts:
        raise DataError("empty corpus")

    ranked = sorted(
        (tok for tok, c in counts.items() if c >= min_freq),
        key=lambda tok: (-counts[tok], tok),
    )
    if not ranked:
        raise DataError(f"no token reaches min_freq={min_freq}")
    return Vocab(list(SPECIAL_TOKENS) + ranked[:max_size - len(SPECIAL_TOKENS)])
