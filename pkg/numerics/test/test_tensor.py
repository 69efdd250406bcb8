"""
Tests for the autodiff tape
Validates recording rules, gradient accumulation and error states
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

import numpy as np
import pytest

from numerics import ops
from numerics.errors import ArgumentError, StateError
from numerics.tensor import Tensor, active_tape, backward, clear_tape, no_grad


def test_constants_are_not_recorded():
    """Operations on tensors without requires_grad leave the tape empty"""
    clear_tape()
    a = Tensor([1.0, 2.0])
    b = Tensor([3.0, 4.0])
    c = a * b + a
    assert len(active_tape()) == 0
    assert c.node is None
    assert np.array_equal(c.data, [4.0, 10.0])
    print("✓ Constant expressions are not recorded")


def test_simple_gradient():
    """d/dx sum(x * x + 3x) = 2x + 3"""
    clear_tape()
    x = Tensor([1.0, -2.0, 0.5], requires_grad=True)
    loss = (x * x + ops.scale(x, 3.0)).sum()
    backward(loss)
    assert np.allclose(x.grad, [5.0, -1.0, 4.0])
    assert np.array_equal(loss.grad, np.ones(()))
    assert len(active_tape()) == 0
    print("✓ Simple gradient correct, tape cleared")


def test_gradients_accumulate():
    """Two backward passes add into the leaf gradient"""
    clear_tape()
    x = Tensor([2.0], requires_grad=True)
    backward((x * x).sum())
    backward((x * x).sum())
    assert np.allclose(x.grad, [8.0])
    x.zero_grad()
    assert x.grad is None
    print("✓ Leaf gradients accumulate across passes")


def test_shared_subexpression():
    """A value used twice receives both gradient contributions"""
    clear_tape()
    x = Tensor([3.0], requires_grad=True)
    y = x * x
    backward((y + y).sum())
    assert np.allclose(x.grad, [12.0])
    print("✓ Shared subexpression gradients summed")


def test_no_grad_context():
    """Nothing is recorded inside no_grad, and recording resumes afterwards"""
    clear_tape()
    x = Tensor([1.0], requires_grad=True)
    with no_grad():
        y = x * x
    assert y.node is None and not y.requires_grad
    z = x * x
    assert z.node is not None
    clear_tape()
    print("✓ no_grad suspends recording")


def test_backward_errors():
    """Non-scalar roots and off-tape losses are rejected"""
    clear_tape()
    x = Tensor([1.0, 2.0], requires_grad=True)
    with pytest.raises(ArgumentError):
        backward(x * x)
    with pytest.raises(StateError):
        backward(Tensor(1.0))
    clear_tape()
    print("✓ backward() errors raised")


def test_item_and_detach():
    """item() needs one value; detach() drops the graph"""
    t = Tensor([[2.5]], requires_grad=True)
    assert t.item() == 2.5
    with pytest.raises(ArgumentError):
        Tensor([1.0, 2.0]).item()
    d = t.detach()
    assert not d.requires_grad
    assert np.array_equal(d.data, t.data)
    print("✓ item() and detach() behave")


def run_all_tests():
    """Run all tape tests"""
    print("Testing Tensor tape...")
    print("-" * 40)

    test_constants_are_not_recorded()
    test_simple_gradient()
    test_gradients_accumulate()
    test_shared_subexpression()
    test_no_grad_context()
    test_backward_errors()
    test_item_and_detach()

    print("-" * 40)
    print("All Tensor tape tests passed! ✓")


if __name__ == "__main__":
    run_all_tests()
