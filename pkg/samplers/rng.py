"""
Random Streams
Seeded numpy generators, reproducible splitting and sampler limits
"""

from typing import Optional, Sequence, Union

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

Rng = Generator
Seed = Union[int, SeedSequence, None]

DEFAULT_SIZE_CAP = 10_000_000
DEFAULT_REJECTION_BUDGET = 1_000_000


class SamplerError(ValueError):
    """Raised when a sampler cannot produce an output"""


class SizeCapExceeded(SamplerError):
    def __init__(self, cap: int, what: str = "map"):
        super().__init__(f"{what} exceeded the size cap of {cap} darts")
        self.cap = cap


class RejectionBudgetExceeded(SamplerError):
    def __init__(self, attempts: int, accepted: int = 0):
        rate = accepted / attempts if attempts else 0.0
        super().__init__(f"rejection budget of {attempts} attempts exhausted (acceptance rate {rate:.3g})")
        self.attempts = attempts
        self.acceptance_rate = rate


def make_rng(seed: Seed = None) -> Rng:
    """PCG64 generator; the same seed gives the same stream on every platform"""
    if isinstance(seed, SeedSequence):
        return Generator(PCG64(seed))
    return Generator(PCG64(SeedSequence(seed)))


def seed_sequences(seed: Seed, n: int) -> list[SeedSequence]:
    """n independent child seeds, picklable for worker processes"""
    root = seed if isinstance(seed, SeedSequence) else SeedSequence(seed)
    return root.spawn(n)


def split(rng: Rng, n: int) -> list[Rng]:
    return rng.spawn(n)


def sample_cdf(rng: Rng, cdf: np.ndarray) -> int:
    """Index drawn from an increasing cumulative table (last entry is the total mass)"""
    u = rng.random() * cdf[-1]
    return min(int(np.searchsorted(cdf, u, side="right")), len(cdf) - 1)


def sample_weights(rng: Rng, weights: Sequence[float], total: Optional[float] = None) -> int:
    cdf = np.cumsum(weights)
    if total is not None and total > cdf[-1]:
        cdf[-1] = total
    return sample_cdf(rng, cdf)
