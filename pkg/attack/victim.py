"""
Victim - Black-box access to a classifier with exact query accounting
"""

import logging
from typing import Callable, List, Sequence, Union

import numpy as np

from numerics.errors import ArgumentError
from model.encoder import Classifier, predict_proba

logger = logging.getLogger(__name__)

ProbaFn = Callable[[List[Sequence[int]]], np.ndarray]


class Victim:
    """
    Classifier seen only through class probabilities

    Every sequence passed to query() counts as one query, whether it is
    sent alone or inside a batch.

    Args:
        model: Classifier, or any callable mapping id sequences to [N, C] probabilities
        batch_size: Chunk size for padded forward passes
    """

    def __init__(self, model: Union[Classifier, ProbaFn], batch_size: int = 256):
        self.model = model
        self.batch_size = batch_size
        self.queries = 0

    def query(self, sequences: Sequence[Sequence[int]]) -> np.ndarray:
        """[N, C] class probabilities; adds N to the counter"""
        sequences = [tuple(s) for s in sequences]
        if not sequences:
            return np.zeros((0, 0))
        if isinstance(self.model, Classifier):
            probs = predict_proba(self.model, sequences, self.batch_size)
        else:
            probs = np.asarray(self.model(sequences), dtype=np.float64)
        if probs.ndim != 2 or probs.shape[0] != len(sequences):
            raise ArgumentError(f"victim returned shape {probs.shape} for {len(sequences)} inputs")
        self.queries += len(sequences)
        return probs

    def query_one(self, ids: Sequence[int]) -> np.ndarray:
        return self.query([ids])[0]

    def predict(self, sequences: Sequence[Sequence[int]]) -> np.ndarray:
        return self.query(sequences).argmax(axis=-1)

    def reset(self) -> int:
        """Zero the counter, returning the previous count"""
        used, self.queries = self.queries, 0
        return used
