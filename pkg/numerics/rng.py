"""
Rng - Seeded, platform-independent pseudo-randomness

The generator is SplitMix64: a 64-bit Weyl counter advanced by the golden
gamma and finalised with two xorshift-multiply rounds. Because each output
depends only on (seed, position), whole blocks are produced with vectorised
numpy uint64 arithmetic and the stream is identical on every platform.

Consumers draw in a fixed order, so one seed pins every sample:
uniform doubles take the top 53 bits of each word, gaussians use
Box-Muller on consecutive pairs of uniforms.
"""

import math
from typing import List

import numpy as np

from .errors import ArgumentError
from .tensor import Tensor

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TWO_POW_53 = float(1 << 53)


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser applied elementwise to a uint64 array"""
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class Rng:
    """
    Deterministic random stream

    Args:
        seed: Any integer; reduced modulo 2**64
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self.state = self.seed
        self.draws = 0

    def next_uint64(self, n: int) -> np.ndarray:
        """Next ``n`` raw 64-bit words"""
        if n < 0:
            raise ArgumentError(f"cannot draw {n} values")
        steps = np.arange(1, n + 1, dtype=np.uint64) * np.uint64(GOLDEN_GAMMA)
        words = _mix64(np.uint64(self.state) + steps)
        self.state = (self.state + n * GOLDEN_GAMMA) & MASK64
        self.draws += n
        return words

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles in [0, 1)"""
        words = self.next_uint64(n)
        return (words >> np.uint64(11)).astype(np.float64) / _TWO_POW_53

    def normal(self, n: int) -> np.ndarray:
        """``n`` standard normal draws (Box-Muller on consecutive pairs)"""
        pairs = (n + 1) // 2
        u = self.uniform(2 * pairs)
        radius = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        angle = 2.0 * math.pi * u[1::2]
        z = np.empty(2 * pairs, dtype=np.float64)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        return z[:n]

    def gaussian(self, n: int, sigma: float) -> np.ndarray:
        """
        ``n`` i.i.d. draws from N(0, sigma^2)

        sigma = 0 still consumes the stream so that later draws do not
        shift with the noise level.
        """
        if sigma < 0 or math.isnan(sigma):
            raise ArgumentError(f"sigma must be non-negative, got {sigma}")
        z = self.normal(n)
        if sigma == 0:
            return np.zeros(n, dtype=np.float64)
        return sigma * z

    def randint(self, n: int, high: int) -> np.ndarray:
        """``n`` integers uniform in [0, high)"""
        if high < 1:
            raise ArgumentError(f"high must be >= 1, got {high}")
        return np.minimum((self.uniform(n) * high).astype(np.int64), high - 1)

    def permutation(self, n: int) -> np.ndarray:
        """Uniform random permutation of range(n)"""
        return np.argsort(self.uniform(n), kind="stable")

    def categorical(self, probs: np.ndarray) -> np.ndarray:
        """
        One index per row of ``probs`` (last axis is the category axis)

        Rows need not be normalised; inverse-CDF sampling on the cumulative sum.
        """
        probs = np.asarray(probs, dtype=np.float64)
        rows = int(np.prod(probs.shape[:-1]))
        u = self.uniform(rows).reshape(probs.shape[:-1] + (1,))
        cdf = np.cumsum(probs, axis=-1)
        idx = (cdf < u * cdf[..., -1:]).sum(axis=-1)
        return np.minimum(idx, probs.shape[-1] - 1)

    def split(self, k: int) -> List["Rng"]:
        """Derive ``k`` independent child streams"""
        return [Rng(int(word)) for word in self.next_uint64(k)]


def gaussian_vector(rng: Rng, n: int, sigma: float) -> Tensor:
    """n i.i.d. N(0, sigma^2) draws as a Tensor"""
    return Tensor(rng.gaussian(n, sigma))
