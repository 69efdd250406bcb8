"""
Losses - Classification loss L_c and the virtual-data regularizer L_reg
"""

from typing import Optional, Sequence

import numpy as np

from numerics import ops
from numerics.errors import ArgumentError
from numerics.tensor import Tensor
from .config import RegLoss


def classification_loss(logits: Tensor, labels) -> Tensor:
    """Mean cross entropy over the batch"""
    labels = np.asarray(labels, dtype=np.int64)
    if logits.ndim != 2 or logits.shape[0] == 0:
        raise ArgumentError(f"expected a non-empty [B, C] batch, got {logits.shape}")
    return ops.cross_entropy(logits, labels, reduction="mean")


def regularization_loss(orig_logits: Tensor, virtual_logits: Sequence[Tensor],
                        kind: RegLoss = RegLoss.SYM_KL, labels: Optional[np.ndarray] = None) -> Tensor:
    """
    (1/k) sum_j D(f(E), f(E_hat_j)), averaged over the batch

    kind=sym_kl uses the symmetric KL between original and virtual predictions;
    kind=ce_on_label replaces it with cross entropy of the virtual logits
    against the gold labels.
    """
    if not virtual_logits:
        raise ArgumentError("need at least one virtual draw")
    kind = RegLoss(kind)
    terms = []
    for v in virtual_logits:
        if v.shape != orig_logits.shape:
            raise ArgumentError(f"virtual logits {v.shape} != original {orig_logits.shape}")
        if kind == RegLoss.SYM_KL:
            terms.append(ops.sym_kl(orig_logits, v, reduction="mean"))
        else:
            if labels is None:
                raise ArgumentError("ce_on_label needs labels")
            terms.append(ops.cross_entropy(v, np.asarray(labels, dtype=np.int64), reduction="mean"))
    total = terms[0]
    for term in terms[1:]:
        total = total + term
    return ops.scale(total, 1.0 / len(terms))
