"""
Sampling Tables
Cumulative tables for discrete laws with unbounded support
"""

from typing import Callable

import numpy as np

from samplers.rng import Rng

INITIAL_SIZE = 64
MAX_SIZE = 1 << 24


class LazyCdf:
    """
    Cumulative weights of a law on 0, 1, 2, ... extended on demand

    weights(n) must return the first n weights. The table doubles until it
    covers the drawn uniform; mass beyond MAX_SIZE is folded into the
    last index.
    """

    def __init__(self, weights: Callable[[int], np.ndarray], total: float = 1.0, size: int = INITIAL_SIZE):
        self.weights = weights
        self.total = total
        self.cdf = np.cumsum(weights(size))

    def __len__(self) -> int:
        return len(self.cdf)

    def extend(self) -> None:
        self.cdf = np.cumsum(self.weights(2 * len(self.cdf)))

    def sample(self, rng: Rng) -> int:
        u = rng.random() * self.total
        while self.cdf[-1] < u and len(self.cdf) < MAX_SIZE:
            before = self.cdf[-1]
            self.extend()
            if self.cdf[-1] <= before:
                break
        return min(int(np.searchsorted(self.cdf, u, side="right")), len(self.cdf) - 1)

    def probability(self, k: int) -> float:
        while len(self.cdf) <= k:
            self.extend()
        return float(self.cdf[k] - (self.cdf[k - 1] if k else 0.0)) / self.total
