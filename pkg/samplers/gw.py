"""
Galton-Watson Trees
Plane trees with offspring law theta, conditioned on their height
"""

import math
from typing import Literal

import numpy as np

from model.formulas import height_survival, power_difference, theta_array
from model.params import ModelParams
from samplers.rng import Rng, SamplerError
from samplers.tables import LazyCdf
from skeleton.forest import Tree

AT_MOST = "at_most"
EXACTLY = "exactly"
UNCONDITIONED_SUPPORT = 1 << 14

HeightMode = Literal["at_most", "exactly"]


def tree_height(tree: Tree) -> int:
    best, stack = 0, [(tree, 0)]
    while stack:
        node, depth = stack.pop()
        best = max(best, depth)
        stack.extend((c, depth + 1) for c in node)
    return best


def tree_size(tree: Tree) -> int:
    count, stack = 0, [tree]
    while stack:
        node = stack.pop()
        count += 1
        stack.extend(node)
    return count


class GaltonWatson:
    """
    Exact height-conditioned GW(theta) sampling

    Under {height <= d} the root has k children with probability
    theta(k) G_d^k / G_{d+1}, each child being conditioned on height <= d-1.
    Under {height = d} the weight is theta(k) (G_d^k - G_{d-1}^k) / (G_{d+1} - G_d)
    and the first child reaching height d-1 is drawn explicitly.
    """

    def __init__(self, params: ModelParams):
        self.params = params
        self._survival = height_survival(params, 64)
        self._le: dict[int, LazyCdf] = {}
        self._eq: dict[int, LazyCdf] = {}

    def survival(self, d: int) -> float:
        """E_d = 1 - G_d"""
        while d >= len(self._survival):
            self._survival = height_survival(self.params, 2 * len(self._survival))
        return float(self._survival[d])

    def log_g(self, d: int) -> float:
        """log G_d (-inf for d = 0)"""
        e = self.survival(d)
        return math.log1p(-e) if e < 1 else -math.inf

    def le_kernel(self, d: int) -> LazyCdf:
        if d not in self._le:
            log_gd = self.log_g(d)
            norm = 1 - self.survival(d + 1)
            params = self.params

            def weights(n: int) -> np.ndarray:
                k = np.arange(n, dtype=float)
                if log_gd == -math.inf:
                    powers = np.where(k == 0, 1.0, 0.0)
                else:
                    powers = np.exp(k * log_gd)
                return theta_array(params, n - 1) * powers / norm

            self._le[d] = LazyCdf(weights)
        return self._le[d]

    def eq_kernel(self, d: int) -> LazyCdf:
        if d < 1:
            raise SamplerError(f"no offspring kernel for exact height {d}")
        if d not in self._eq:
            e_prev, e_d = self.survival(d - 1), self.survival(d)
            norm = e_d - self.survival(d + 1)
            params = self.params

            def weights(n: int) -> np.ndarray:
                k = np.arange(n, dtype=float)
                return theta_array(params, n - 1) * power_difference(e_d, e_prev, k) / norm

            self._eq[d] = LazyCdf(weights)
        return self._eq[d]

    def first_exact_child(self, rng: Rng, k: int, d: int) -> int:
        """Position of the first of k children reaching height d-1, given that one does"""
        if d == 1:
            return 0
        # P(i) is proportional to (G_{d-1} / G_d)^i
        log_ratio = self.log_g(d - 1) - self.log_g(d)
        weights = np.exp(np.arange(k) * log_ratio)
        return int(np.searchsorted(np.cumsum(weights), rng.random() * weights.sum(), side="right"))

    def sample(self, rng: Rng, height: int, mode: HeightMode = AT_MOST) -> Tree:
        if height < 0:
            raise SamplerError(f"height bound must be nonnegative, got {height}")
        root: Tree = []
        stack = [(root, height, mode == EXACTLY)]
        while stack:
            node, bound, exact = stack.pop()
            if exact and bound == 0:
                continue
            if not exact:
                k = self.le_kernel(bound).sample(rng)
                for _ in range(k):
                    child: Tree = []
                    node.append(child)
                    stack.append((child, bound - 1, False))
                continue
            k = self.eq_kernel(bound).sample(rng)
            first = min(self.first_exact_child(rng, k, bound), k - 1)
            for i in range(k):
                child = []
                node.append(child)
                if i < first:
                    stack.append((child, bound - 2, False))
                elif i == first:
                    stack.append((child, bound - 1, True))
                else:
                    stack.append((child, bound - 1, False))
        return root

    def _offspring_cdf(self) -> np.ndarray:
        if not hasattr(self, "_cdf"):
            self._cdf = np.cumsum(theta_array(self.params, UNCONDITIONED_SUPPORT))
        return self._cdf

    def sample_height(self, rng: Rng, cap: int) -> int:
        """Height of an unconditioned tree, reported as cap + 1 beyond cap"""
        size, depth = 1, 0
        th = self._offspring_cdf()
        while size > 0:
            draws = np.searchsorted(th, rng.random(size) * th[-1], side="right")
            size = int(np.minimum(draws, len(th) - 1).sum())
            if size == 0:
                return depth
            depth += 1
            if depth > cap:
                return cap + 1
        return depth


def sample_gw_height_conditioned(params: ModelParams, maxheight: int, mode: HeightMode,
                                 rng: Rng) -> Tree:
    """
    GW(theta) plane tree conditioned on height <= maxheight or = maxheight

    Args:
        params: model parameters
        maxheight: the height bound r >= 0
        mode: "at_most" or "exactly"
        rng: random stream

    Returns:
        The tree as nested child lists
    """
    return GaltonWatson(params).sample(rng, maxheight, mode)
