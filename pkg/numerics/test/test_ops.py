"""
Tests for the differentiable kernels
Validates every layer type against central finite differences and
softmax / cross-entropy / symmetric KL against high-precision oracles
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

import math
from decimal import Decimal, getcontext

import numpy as np
import pytest

from numerics import ops
from numerics.errors import ArgumentError, NumericError
from numerics.gradcheck import check_gradients
from numerics.tensor import Tensor, clear_tape

TOLERANCE = 1e-4


def _param(shape, seed, name, low=None):
    rng = np.random.default_rng(seed)
    data = rng.normal(size=shape)
    if low is not None:
        data = low + np.abs(data)
    return Tensor(data, requires_grad=True, name=name)


def _weights(shape, seed):
    return Tensor(np.random.default_rng(1000 + seed).normal(size=shape))


def _assert_gradients(loss_fn, params):
    clear_tape()
    errors = check_gradients(loss_fn, params, h=1e-5)
    assert max(errors.values()) < TOLERANCE, errors


def _softmax_oracle(row):
    getcontext().prec = 50
    exps = [Decimal(repr(float(v))).exp() for v in row]
    total = sum(exps)
    return [e / total for e in exps]


# ---------------------------------------------------------------- gradients

def test_gradcheck_elementwise():
    """add, sub, mul with broadcasting; scale and neg"""
    a = _param((3, 4), 0, "a")
    b = _param((4,), 1, "b")
    w = _weights((3, 4), 0)
    _assert_gradients(lambda: ((a * b + ops.sub(a, b) - ops.scale(b, 0.5)) * w).sum(), [a, b])
    _assert_gradients(lambda: (ops.neg(a) * w).sum(), [a])
    print("✓ Elementwise gradients match")


def test_gradcheck_relu():
    """ReLU away from the kink"""
    data = np.array([[-1.5, 0.3, 2.0], [0.7, -0.2, -3.0]])
    x = Tensor(data, requires_grad=True, name="x")
    w = _weights((2, 3), 1)
    _assert_gradients(lambda: (ops.relu(x) * w).sum(), [x])
    print("✓ ReLU gradient matches")


def test_gradcheck_exp_log_clamp():
    """exp, log on positive inputs, clamp_min above the floor"""
    x = _param((5,), 2, "x", low=0.5)
    w = _weights((5,), 2)
    _assert_gradients(lambda: (ops.exp(ops.scale(x, 0.3)) * w).sum(), [x])
    _assert_gradients(lambda: (ops.log(x) * w).sum(), [x])
    _assert_gradients(lambda: (ops.clamp_min(x, 0.1) * w).sum(), [x])
    print("✓ exp / log / clamp_min gradients match")


def test_gradcheck_matmul():
    """Plain and batched matrix products"""
    a = _param((2, 3, 4), 3, "a")
    b = _param((4, 5), 4, "b")
    w = _weights((2, 3, 5), 3)
    _assert_gradients(lambda: ((a @ b) * w).sum(), [a, b])
    c = _param((2, 5, 3), 5, "c")
    w2 = _weights((2, 3, 3), 4)
    _assert_gradients(lambda: ((a @ b @ c) * w2).sum(), [a, b, c])
    print("✓ matmul gradients match")


def test_gradcheck_shapes():
    """reshape, transpose, getitem, sum and mean"""
    x = _param((2, 3, 4), 6, "x")
    w = _weights((4, 6), 5)
    _assert_gradients(lambda: (x.reshape(6, 4).transpose() * w).sum(), [x])
    _assert_gradients(lambda: (x[:, 0, :] * _weights((2, 4), 6)).sum(), [x])
    _assert_gradients(lambda: (x.sum(axis=1) * _weights((2, 4), 7)).mean(), [x])
    _assert_gradients(lambda: (x.mean(axis=-1, keepdims=True) * _weights((2, 3, 1), 8)).sum(), [x])
    print("✓ Shape-op gradients match")


def test_gradcheck_where():
    """where routes gradients to the selected branch"""
    a = _param((3, 3), 7, "a")
    b = _param((3, 3), 8, "b")
    cond = np.eye(3, dtype=bool)
    _assert_gradients(lambda: (ops.where(cond, a, b) * _weights((3, 3), 9)).sum(), [a, b])
    print("✓ where gradient matches")


def test_gradcheck_embedding_lookup():
    """Repeated ids accumulate into the same table row"""
    table = _param((6, 3), 9, "table")
    ids = np.array([[0, 2, 2], [5, 1, 2]])
    _assert_gradients(lambda: (ops.embedding_lookup(table, ids) * _weights((2, 3, 3), 10)).sum(), [table])
    print("✓ embedding_lookup gradient matches")


def test_gradcheck_layer_norm():
    """Layer norm with and without the affine parameters"""
    x = _param((2, 3, 5), 10, "x")
    gamma = _param((5,), 11, "gamma")
    beta = _param((5,), 12, "beta")
    w = _weights((2, 3, 5), 11)
    _assert_gradients(lambda: (ops.layer_norm(x, gamma, beta) * w).sum(), [x, gamma, beta])
    _assert_gradients(lambda: (ops.layer_norm(x) * w).sum(), [x])
    print("✓ layer_norm gradients match")


def test_gradcheck_softmax_family():
    """softmax, log_softmax, cross_entropy (all reductions) and sym_kl"""
    x = _param((3, 4), 13, "x")
    y = _param((3, 4), 14, "y")
    labels = np.array([0, 3, 1])
    w = _weights((3, 4), 12)
    _assert_gradients(lambda: (ops.softmax(x) * w).sum(), [x])
    _assert_gradients(lambda: (ops.log_softmax(x) * w).sum(), [x])
    for reduction in ("mean", "sum"):
        _assert_gradients(lambda: ops.cross_entropy(x, labels, reduction), [x])
    _assert_gradients(lambda: (ops.cross_entropy(x, labels, "none") * _weights((3,), 13)).sum(), [x])
    _assert_gradients(lambda: ops.sym_kl(x, y, reduction="mean"), [x, y])
    print("✓ Softmax-family gradients match")


# ---------------------------------------------------------------- oracles

def test_softmax_oracle():
    """softmax agrees with a 50-digit Decimal computation"""
    rows = np.array([[1.0, 2.0, 3.0], [-4.0, 0.5, 10.0], [0.0, 0.0, 0.0]])
    out = ops.softmax(Tensor(rows)).data
    for row, got in zip(rows, out):
        expected = _softmax_oracle(row)
        for g, e in zip(got, expected):
            assert abs(Decimal(repr(float(g))) - e) < Decimal("1e-15")
    assert np.allclose(out.sum(axis=-1), 1.0, atol=1e-15)
    print("✓ softmax matches Decimal oracle")


def test_softmax_large_logits_stable():
    """Max subtraction keeps huge logits finite"""
    out = ops.softmax(Tensor([1000.0, 1000.0])).data
    assert np.allclose(out, [0.5, 0.5])
    print("✓ softmax stable on large logits")


def test_cross_entropy_values():
    """Uniform logits give ln C; confident correct logits give ~0; mean is the per-example average"""
    uniform = ops.cross_entropy(Tensor([[0.0, 0.0]]), np.array([1]))
    assert abs(uniform.item() - math.log(2)) < 1e-15

    confident = ops.cross_entropy(Tensor([[50.0, -50.0]]), np.array([0]))
    assert confident.item() < 1e-30

    logits = np.array([[1.0, 2.0, 0.5], [0.3, -1.0, 2.2]])
    labels = np.array([2, 0])
    per_example = ops.cross_entropy(Tensor(logits), labels, "none").data
    for row, label, got in zip(logits, labels, per_example):
        expected = -_softmax_oracle(row)[label].ln()
        assert abs(Decimal(repr(float(got))) - expected) < Decimal("1e-14")
    mean = ops.cross_entropy(Tensor(logits), labels, "mean").item()
    assert abs(mean - per_example.sum() / 2) < 1e-15
    print("✓ cross_entropy values match oracles")


def test_cross_entropy_label_errors():
    """Out-of-range labels and mismatched shapes are argument errors"""
    with pytest.raises(ArgumentError):
        ops.cross_entropy(Tensor([[0.0, 1.0]]), np.array([2]))
    with pytest.raises(ArgumentError):
        ops.cross_entropy(Tensor([[0.0, 1.0]]), np.array([-1]))
    with pytest.raises(ArgumentError):
        ops.cross_entropy(Tensor([[0.0, 1.0]]), np.array([0, 1]))
    print("✓ cross_entropy label errors raised")


def test_sym_kl_oracle():
    """sym_kl equals KL(p||q) + KL(q||p) computed in Decimal"""
    a = np.array([0.2, -1.0, 1.5])
    b = np.array([1.0, 0.0, -0.5])
    p, q = _softmax_oracle(a), _softmax_oracle(b)
    expected = sum(pi * (pi / qi).ln() for pi, qi in zip(p, q)) + sum(
        qi * (qi / pi).ln() for pi, qi in zip(p, q)
    )
    got = ops.sym_kl(Tensor(a), Tensor(b)).item()
    assert abs(Decimal(repr(got)) - expected) < Decimal("1e-14")
    print("✓ sym_kl matches Decimal oracle")


def test_sym_kl_identities():
    """Exact zero on identical inputs and exact symmetry on random cases"""
    rng = np.random.default_rng(42)
    for _ in range(200):
        width = int(rng.integers(2, 12))
        a = rng.normal(scale=3.0, size=(4, width))
        b = rng.normal(scale=3.0, size=(4, width))
        assert np.all(ops.sym_kl(Tensor(a), Tensor(a)).data == 0.0)
        assert np.array_equal(ops.sym_kl(Tensor(a), Tensor(b)).data, ops.sym_kl(Tensor(b), Tensor(a)).data)
        assert np.all(ops.sym_kl(Tensor(a), Tensor(b)).data >= 0.0)
    print("✓ sym_kl zero and symmetry identities hold")


def test_errors():
    """Shape mismatches and NaN inputs are reported"""
    with pytest.raises(ArgumentError):
        ops.add(Tensor(np.ones((2, 3))), Tensor(np.ones((4,))))
    with pytest.raises(ArgumentError):
        ops.matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((2, 3))))
    with pytest.raises(ArgumentError):
        ops.embedding_lookup(Tensor(np.ones((3, 2))), np.array([3]))
    with pytest.raises(NumericError):
        ops.softmax(Tensor([1.0, float("nan")]))
    with pytest.raises(NumericError):
        ops.log(Tensor([1.0, 0.0]))
    with pytest.raises(ArgumentError):
        ops.sym_kl(Tensor(np.ones(3)), Tensor(np.ones(4)))
    print("✓ Kernel errors raised")


def test_layer_norm_constant_row():
    """A constant row normalises to zero"""
    out = ops.layer_norm(Tensor([[2.0, 2.0, 2.0]])).data
    assert np.array_equal(out, np.zeros((1, 3)))
    print("✓ layer_norm maps constant rows to zero")


def run_all_tests():
    """Run all kernel tests"""
    print("Testing numerics kernels...")
    print("-" * 40)

    test_gradcheck_elementwise()
    test_gradcheck_relu()
    test_gradcheck_exp_log_clamp()
    test_gradcheck_matmul()
    test_gradcheck_shapes()
    test_gradcheck_where()
    test_gradcheck_embedding_lookup()
    test_gradcheck_layer_norm()
    test_gradcheck_softmax_family()
    test_softmax_oracle()
    test_softmax_large_logits_stable()
    test_cross_entropy_values()
    test_cross_entropy_label_errors()
    test_sym_kl_oracle()
    test_sym_kl_identities()
    test_errors()
    test_layer_norm_constant_row()

    print("-" * 40)
    print("All numerics kernel tests passed! ✓")


if __name__ == "__main__":
    run_all_tests()
