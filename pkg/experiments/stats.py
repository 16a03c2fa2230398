"""
Statistics
Goodness-of-fit helpers with bins fixed by the exact law before any data is seen
"""

import math
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats

MIN_EXPECTED = 5.0
DEFAULT_TAIL = 1e-4


class ChiSquareResult(NamedTuple):
    statistic: float
    pvalue: float
    dof: int
    edges: list[int]


class KsResult(NamedTuple):
    statistic: float
    pvalue: float


class MeanEstimate(NamedTuple):
    mean: float
    stderr: float
    n: int

    def interval(self, z: float = 3.0) -> tuple[float, float]:
        return self.mean - z * self.stderr, self.mean + z * self.stderr

    def zscore(self, target: float) -> float:
        if self.stderr == 0:
            return 0.0 if self.mean == target else math.inf
        return (self.mean - target) / self.stderr


def support_for(probs: np.ndarray, tail: float = DEFAULT_TAIL) -> int:
    """Smallest k such that the law puts at most `tail` mass above k"""
    cdf = np.cumsum(probs)
    hit = np.nonzero(cdf >= 1 - tail)[0]
    return int(hit[0]) if len(hit) else len(probs) - 1


def merge_bins(expected: np.ndarray, min_expected: float = MIN_EXPECTED) -> list[int]:
    """
    Left edges of merged bins over consecutive cells

    Cells are swept from the left and closed as soon as they hold
    min_expected; a short remainder is folded into the last bin.
    """
    edges, acc = [], 0.0
    start = 0
    for i, e in enumerate(expected):
        acc += e
        if acc >= min_expected:
            edges.append(start)
            start, acc = i + 1, 0.0
    if not edges:
        return [0]
    return edges


def _rebin(values: np.ndarray, edges: list[int]) -> np.ndarray:
    bounds = edges[1:] + [len(values)]
    return np.array([values[a:b].sum() for a, b in zip(edges, bounds)])


def chi_square_discrete(samples: Sequence[int], probs: np.ndarray, lo: int = 0,
                        tail: float = DEFAULT_TAIL, min_expected: float = MIN_EXPECTED) -> ChiSquareResult:
    """
    Pearson test of integer samples against a law on lo, lo+1, ...

    probs[k] is the probability of value k. The support is cut where the
    law leaves at most `tail`; the remaining mass and every sample above
    the cut share the last cell.
    """
    probs = np.asarray(probs, dtype=float)
    kmax = max(support_for(probs, tail), lo)
    cells = np.append(probs[lo: kmax + 1], max(0.0, 1.0 - probs[lo: kmax + 1].sum() - probs[:lo].sum()))
    n = len(samples)
    expected = n * cells
    x = np.asarray(samples, dtype=int)
    observed = np.bincount(np.clip(x, lo, kmax + 1) - lo, minlength=len(cells)).astype(float)
    edges = merge_bins(expected, min_expected)
    exp_b, obs_b = _rebin(expected, edges), _rebin(observed, edges)
    # scipy requires equal totals
    exp_b *= obs_b.sum() / exp_b.sum()
    if len(edges) < 2:
        return ChiSquareResult(0.0, 1.0, 0, edges)
    statistic, pvalue = stats.chisquare(obs_b, exp_b)
    return ChiSquareResult(float(statistic), float(pvalue), len(edges) - 1, edges)


def ks_exponential(samples: Sequence[float], rate: float) -> KsResult:
    statistic, pvalue = stats.kstest(np.asarray(samples, dtype=float), "expon", args=(0.0, 1.0 / rate))
    return KsResult(float(statistic), float(pvalue))


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> KsResult:
    statistic, pvalue = stats.ks_2samp(a, b)
    return KsResult(float(statistic), float(pvalue))


def mean_estimate(samples: Sequence[float]) -> MeanEstimate:
    x = np.asarray(samples, dtype=float)
    if len(x) < 2:
        return MeanEstimate(float(x.mean()) if len(x) else math.nan, math.inf, len(x))
    return MeanEstimate(float(x.mean()), float(x.std(ddof=1) / math.sqrt(len(x))), len(x))


def z_pvalue(z: float) -> float:
    """Two-sided normal p-value"""
    return float(2 * stats.norm.sf(abs(z)))


def proportion_pvalue(successes: int, trials: int, p: float) -> float:
    return float(stats.binomtest(successes, trials, p).pvalue)
