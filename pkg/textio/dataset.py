"""
Dataset - JSONL ingestion and export

Each line is one object with keys exactly {"text", "label"} or
{"text_a", "text_b", "label"}; labels are 0-based integers.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from numerics.errors import DataError
from .encoding import EncodedExample, encode
from .vocab import Vocab

logger = logging.getLogger(__name__)

SINGLE_KEYS = frozenset({"text", "label"})
PAIR_KEYS = frozenset({"text_a", "text_b", "label"})

PathLike = Union[str, Path]


def _validate_record(record: object, line_number: int) -> Dict:
    if not isinstance(record, dict):
        raise DataError("expected a JSON object", line_number)
    keys = frozenset(record)
    if keys not in (SINGLE_KEYS, PAIR_KEYS):
        missing = sorted((SINGLE_KEYS if "text" in keys else PAIR_KEYS) - keys)
        extra = sorted(keys - SINGLE_KEYS - PAIR_KEYS)
        detail = f"missing {missing}" if missing else f"unexpected keys {extra or sorted(keys)}"
        raise DataError(f"bad schema: {detail}", line_number)
    label = record["label"]
    if isinstance(label, bool) or not isinstance(label, int) or label < 0:
        raise DataError(f"label must be a non-negative integer, got {label!r}", line_number)
    for key in keys - {"label"}:
        if not isinstance(record[key], str):
            raise DataError(f"{key!r} must be a string", line_number)
    return record


def read_records(path: PathLike, num_classes: Optional[int] = None) -> List[Dict]:
    """Validated raw records in file order; blank lines are skipped"""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"invalid JSON ({exc.msg})", line_number) from None
            record = _validate_record(record, line_number)
            if num_classes is not None and record["label"] >= num_classes:
                raise DataError(f"label {record['label']} >= num_classes {num_classes}", line_number)
            records.append(record)
    return records


def record_texts(records: Iterable[Dict]) -> Iterable[str]:
    """Every text field, for vocabulary building"""
    for record in records:
        if "text" in record:
            yield record["text"]
        else:
            yield record["text_a"]
            yield record["text_b"]


def encode_record(vocab: Vocab, record: Dict, max_len: int) -> EncodedExample:
    if "text" in record:
        return encode(vocab, record["text"], None, record["label"], max_len)
    return encode(vocab, record["text_a"], record["text_b"], record["label"], max_len)


def load_jsonl(path: PathLike, vocab: Vocab, max_len: int,
               num_classes: Optional[int] = None) -> List[EncodedExample]:
    """
    Encode every line of a dataset file, preserving order

    Raises:
        OSError: unreadable file
        DataError: malformed line (message names the line number)
    """
    examples = [encode_record(vocab, record, max_len) for record in read_records(path, num_classes)]
    logger.debug("loaded %d examples from %s", len(examples), path)
    return examples


def write_jsonl(path: PathLike, records: Iterable[Dict]) -> int:
    """Write records one per line; returns the count"""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            count += 1
    return count
