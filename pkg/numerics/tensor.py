"""
Tensor - Dense float64 arrays recorded on a define-by-run tape

Every differentiable kernel in ``numerics.ops`` appends one node to the
active tape when recording is enabled and one of its inputs requires a
gradient. ``backward`` walks the tape in reverse creation order, which is
already a topological order, then clears it.
"""

from contextlib import contextmanager
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ArgumentError, StateError

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Tensor:
    """
    Dense numeric array with an optional gradient slot

    Args:
        data: Array-like values, stored as float64
        requires_grad: Whether backward() should populate ``grad``
        name: Optional label used in diagnostics and checkpoints
    """

    __slots__ = ("data", "grad", "requires_grad", "node", "name")

    def __init__(self, data, requires_grad: bool = False, name: Optional[str] = None):
        self.data: np.ndarray = np.asarray(data, dtype=np.float64)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self.node: Optional["Node"] = None
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def values(self) -> np.ndarray:
        """Flat view of the data"""
        return self.data.reshape(-1)

    def item(self) -> float:
        if self.size != 1:
            raise ArgumentError(f"item() needs a single value, shape is {self.shape}")
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> "Tensor":
        """Same storage, no gradient tracking"""
        return Tensor(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    def __len__(self) -> int:
        return self.shape[0]

    def __repr__(self) -> str:
        label = f", name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"


class Node:
    """One recorded operation: output, inputs and the local backward rule"""

    __slots__ = ("out", "parents", "backward")

    def __init__(self, out: Tensor, parents: Tuple[Tensor, ...], backward: BackwardFn):
        self.out = out
        self.parents = parents
        self.backward = backward


class Tape:
    """Ordered record of the operations of the current forward pass"""

    def __init__(self):
        self.nodes: List[Node] = []
        self.enabled = True

    def record(self, out: Tensor, parents: Tuple[Tensor, ...], backward: BackwardFn) -> None:
        node = Node(out, parents, backward)
        out.node = node
        self.nodes.append(node)

    def clear(self) -> None:
        for node in self.nodes:
            node.out.node = None
        self.nodes = []

    def __len__(self) -> int:
        return len(self.nodes)


_TAPE = Tape()


def active_tape() -> Tape:
    return _TAPE


def clear_tape() -> None:
    _TAPE.clear()


@contextmanager
def no_grad() -> Iterator[None]:
    """Run forward passes without recording anything"""
    previous = _TAPE.enabled
    _TAPE.enabled = False
    try:
        yield
    finally:
        _TAPE.enabled = previous


def make_result(data: np.ndarray, parents: Tuple[Tensor, ...], backward: BackwardFn) -> Tensor:
    """Wrap a kernel output, recording it when any parent needs a gradient"""
    out = Tensor(data)
    if _TAPE.enabled and any(p.requires_grad for p in parents):
        out.requires_grad = True
        _TAPE.record(out, parents, backward)
    return out


def backward(loss: Tensor) -> None:
    """
    Reverse-mode sweep from a scalar loss

    Populates ``grad`` (accumulating) on every leaf tensor with
    ``requires_grad`` reachable from ``loss``, then clears the tape.
    """
    if loss.size != 1:
        raise ArgumentError(f"backward() needs a scalar root, got shape {loss.shape}")
    if loss.node is None:
        raise StateError("loss is not on the active tape")

    grads: Dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
    leaves: Dict[int, Tensor] = {}
    for node in reversed(_TAPE.nodes):
        g = grads.pop(id(node.out), None)
        if g is None:
            continue
        for parent, pg in zip(node.parents, node.backward(g)):
            if pg is None or not parent.requires_grad:
                continue
            key = id(parent)
            if parent.node is None:
                leaves[key] = parent
            grads[key] = grads[key] + pg if key in grads else pg

    for key, leaf in leaves.items():
        g = np.array(grads[key], dtype=np.float64)
        leaf.grad = g if leaf.grad is None else leaf.grad + g
    loss.grad = np.ones_like(loss.data)
    _TAPE.clear()
