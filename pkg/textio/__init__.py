"""
Textio: vocabulary, tokenization, JSONL datasets and the synthetic corpus
"""

from .vocab import (
    CLS_ID,
    MASK_ID,
    PAD_ID,
    SEP_ID,
    SPECIAL_TOKENS,
    UNK_ID,
    Vocab,
    build_vocab,
    tokenize,
)
from .encoding import EncodedExample, decode, encode, pad_batch
from .dataset import load_jsonl, read_records, record_texts, write_jsonl
from .synthetic import (
    SyntheticSpec,
    class_balance,
    class_words,
    generate_synthetic_corpus,
    load_synonyms,
)

__all__ = [
    'CLS_ID', 'MASK_ID', 'PAD_ID', 'SEP_ID', 'SPECIAL_TOKENS', 'UNK_ID',
    'Vocab', 'build_vocab', 'tokenize',
    'EncodedExample', 'decode', 'encode', 'pad_batch',
    'load_jsonl', 'read_records', 'record_texts', 'write_jsonl',
    'SyntheticSpec', 'class_balance', 'class_words', 'generate_synthetic_corpus',
    'load_synonyms',
]
