"""
Tests for the seeded random stream
Validates determinism, stream accounting and distribution statistics
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

import numpy as np
import pytest

from numerics.errors import ArgumentError
from numerics.rng import Rng, gaussian_vector


def test_deterministic():
    """Same seed, same stream; different seed, different stream"""
    assert np.array_equal(Rng(7).next_uint64(10), Rng(7).next_uint64(10))
    assert not np.array_equal(Rng(7).next_uint64(10), Rng(8).next_uint64(10))
    print("✓ Streams are deterministic per seed")


def test_chunking_invariance():
    """Drawing 10 then 10 equals drawing 20 at once"""
    a = Rng(3)
    first = np.concatenate([a.next_uint64(10), a.next_uint64(10)])
    assert np.array_equal(first, Rng(3).next_uint64(20))
    assert a.draws == 20
    print("✓ Draws do not depend on chunking")


def test_uniform_range_and_mean():
    """Uniforms lie in [0, 1) with mean near 1/2"""
    u = Rng(11).uniform(100_000)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.01
    print("✓ Uniform draws in range, mean ~ 0.5")


def test_normal_moments():
    """Standard normal draws have mean ~0 and variance ~1"""
    z = Rng(5).normal(200_000)
    assert abs(z.mean()) < 0.01
    assert abs(z.var() - 1.0) < 0.02
    print("✓ Normal draws have unit moments")


def test_gaussian_sigma():
    """sigma scales the spread; sigma = 0 is all zeros yet consumes the stream"""
    z = Rng(9).gaussian(100_000, 0.5)
    assert abs(z.std() - 0.5) < 0.01

    a, b = Rng(9), Rng(9)
    zeros = a.gaussian(6, 0.0)
    b.gaussian(6, 1.0)
    assert np.array_equal(zeros, np.zeros(6))
    assert np.array_equal(a.uniform(4), b.uniform(4))

    with pytest.raises(ArgumentError):
        Rng(0).gaussian(3, -1.0)
    with pytest.raises(ArgumentError):
        Rng(0).gaussian(3, float("nan"))
    print("✓ gaussian() honours sigma and stream accounting")


def test_gaussian_small_sigma_std():
    """A million draws at sigma = 0.01 have sample std within 1% of sigma"""
    z = Rng(7).gaussian(10**6, 0.01)
    assert 0.0099 <= z.std() <= 0.0101
    assert abs(z.mean()) < 1e-4
    print(f"✓ gaussian(10^6, 0.01) std {z.std():.6f}")


def test_randint_and_permutation():
    """randint stays in range; permutation is a permutation"""
    r = Rng(2).randint(10_000, 7)
    assert r.min() == 0 and r.max() == 6
    p = Rng(2).permutation(50)
    assert sorted(p.tolist()) == list(range(50))
    with pytest.raises(ArgumentError):
        Rng(0).randint(1, 0)
    print("✓ randint and permutation behave")


def test_categorical():
    """One-hot rows always pick their support; frequencies follow weights"""
    probs = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    assert Rng(1).categorical(probs).tolist() == [1, 2]
    weights = np.tile([0.2, 0.3, 0.5], (50_000, 1))
    picks = Rng(4).categorical(weights)
    freq = np.bincount(picks, minlength=3) / picks.size
    assert np.allclose(freq, [0.2, 0.3, 0.5], atol=0.01)
    print("✓ categorical sampling matches weights")


def test_split_streams_differ():
    """Child streams are distinct and reproducible"""
    a, b = Rng(100).split(2)
    c, d = Rng(100).split(2)
    assert not np.array_equal(a.uniform(5), b.uniform(5))
    assert np.array_equal(c.uniform(5), Rng(100).split(2)[0].uniform(5))
    assert np.array_equal(d.uniform(5), Rng(100).split(2)[1].uniform(5))
    print("✓ split() derives reproducible independent streams")


def test_gaussian_vector():
    """Tensor wrapper around gaussian()"""
    t = gaussian_vector(Rng(6), 8, 0.1)
    assert t.shape == (8,)
    assert np.array_equal(t.data, Rng(6).gaussian(8, 0.1))
    print("✓ gaussian_vector wraps gaussian()")


def run_all_tests():
    """Run all random stream tests"""
    print("Testing Rng...")
    print("-" * 40)

    test_deterministic()
    test_chunking_invariance()
    test_uniform_range_and_mean()
    test_normal_moments()
    test_gaussian_sigma()
    test_gaussian_small_sigma_std()
    test_randint_and_permutation()
    test_categorical()
    test_split_streams_differ()
    test_gaussian_vector()

    print("-" * 40)
    print("All Rng tests passed! ✓")


if __name__ == "__main__":
    run_all_tests()
