"""
Reverse Trees
Balls of the infinite reverse trees tau0 and tau1, and their spine decomposition
"""

from typing import Literal

import numpy as np
from pydantic import BaseModel

from model.formulas import spine_truncation_error, y_law
from model.params import ModelError, ModelParams
from samplers.gw import AT_MOST, EXACTLY, GaltonWatson
from samplers.rng import DEFAULT_REJECTION_BUDGET, RejectionBudgetExceeded, Rng, SamplerError
from samplers.tables import LazyCdf
from skeleton.forest import ReverseForest, Tree

TAU0 = "tau0"
TAU1 = "tau1"
TAU1_STAR = "tau1star"
BALL = "ball"
SPINE = "spine"

Variant = Literal["tau0", "tau1", "tau1star"]
Method = Literal["ball", "spine"]

SPINE_TOLERANCE = 1e-9
MAX_SPINE_MARGIN = 512


class SpineSection(BaseModel):
    """Trees grafted on the spine vertex at a given level, left and right of the spine"""

    level: int
    L: int
    R: int
    left_trees: list
    right_trees: list


def _forest_from_trees(trees: list[Tree], r: int) -> ReverseForest:
    """Forest of height r whose distinguished vertex is the leftmost one at reverse height 0"""
    for t, tree in enumerate(trees):
        path = _leftmost_path(tree, r)
        if path is not None:
            return ReverseForest.from_trees(trees, r, [t] + path)
    raise SamplerError(f"no vertex at reverse height 0 in a forest of height {r}")


def _leftmost_path(tree: Tree, depth: int):
    """Child indices to the leftmost vertex at the given depth, or None"""
    stack = [(tree, 0, [])]
    while stack:
        node, d, path = stack.pop()
        if d == depth:
            return path
        for i in range(len(node) - 1, -1, -1):
            stack.append((node[i], d + 1, path + [i]))
    return None


class ReverseTreeSampler:
    """Samplers of B_r(tau0), B_r(tau1) and of the spine decomposition of tau0"""

    def __init__(self, params: ModelParams, rejection_budget: int = DEFAULT_REJECTION_BUDGET,
                 spine_tolerance: float = SPINE_TOLERANCE, max_margin: int = MAX_SPINE_MARGIN):
        self.params = params
        self.gw = GaltonWatson(params)
        self.rejection_budget = rejection_budget
        self.spine_tolerance = spine_tolerance
        self.max_margin = max_margin
        self._y: dict[int, LazyCdf] = {}
        self._margins: dict[int, int] = {}
        self.attempts = 0
        self.accepted = 0

    def y_table(self, r: int) -> LazyCdf:
        if r not in self._y:
            params = self.params
            self._y[r] = LazyCdf(lambda n: y_law(params, r, n - 1))
        return self._y[r]

    def sample_forest(self, rng: Rng, p: int, r: int) -> list[Tree]:
        """p independent GW trees conditioned on the forest having height exactly r"""
        if r == 0:
            return [[] for _ in range(p)]
        # the first tree of height exactly r sits at i with weight (G_r / G_{r+1})^i
        log_ratio = self.gw.log_g(r) - self.gw.log_g(r + 1)
        weights = np.exp(np.arange(p) * log_ratio)
        first = int(np.searchsorted(np.cumsum(weights), rng.random() * weights.sum(), side="right"))
        first = min(first, p - 1)
        trees = []
        for i in range(p):
            if i < first:
                trees.append(self.gw.sample(rng, r - 1, AT_MOST))
            elif i == first:
                trees.append(self.gw.sample(rng, r, EXACTLY))
            else:
                trees.append(self.gw.sample(rng, r, AT_MOST))
        return trees

    def sample_tau0(self, rng: Rng, r: int) -> ReverseForest:
        """B_r(tau0): Y(r) from its exact law, then the conditioned forest"""
        p = self.y_table(r).sample(rng)
        if p == 0:
            raise SamplerError(f"Y({r}) drew an empty level")
        return _forest_from_trees(self.sample_forest(rng, p, r), r)

    def sample_tau1(self, rng: Rng, r: int) -> ReverseForest:
        """B_r(tau1): B_r(tau0) conditioned on a single vertex at reverse height 0"""
        for _ in range(self.rejection_budget):
            self.attempts += 1
            ball = self.sample_tau0(rng, r)
            if ball.bottom_size == 1:
                self.accepted += 1
                return ball
        raise RejectionBudgetExceeded(self.rejection_budget, self.accepted)

    def sample_tau1_star(self, rng: Rng, r: int) -> ReverseForest:
        """
        Ball of radius r of tau1 with its reverse-height-0 vertex cut

        Built from B_{r+1}(tau1); reverse heights drop by one.
        """
        ball = self.sample_tau1(rng, r + 1)
        trees = ball.to_trees()
        path = ball.path_of(ball.distinguished)
        node = trees[path[0]]
        for i in path[1:-1]:
            node = node[i]
        del node[path[-1]]
        return _forest_from_trees(trees, r)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.attempts if self.attempts else 0.0

    # ------------------------------------------------------------------
    # Spine construction
    # ------------------------------------------------------------------

    def sample_section(self, rng: Rng, level: int) -> SpineSection:
        """
        (L, R) at a spine level and the trees grafted there

        L + R + 1 is the child count of a vertex conditioned on height
        exactly level; L is the position of the spine among those children.
        """
        k = self.gw.eq_kernel(level).sample(rng)
        left = min(self.gw.first_exact_child(rng, k, level), k - 1)
        right = k - 1 - left
        return SpineSection(
            level=level,
            L=left,
            R=right,
            left_trees=[self.gw.sample(rng, level - 2, AT_MOST) for _ in range(left)],
            right_trees=[self.gw.sample(rng, level - 1, AT_MOST) for _ in range(right)],
        )

    def sample_spine(self, rng: Rng, r: int) -> tuple[Tree, list[SpineSection]]:
        """
        d_r(tau0), the descendants of the spine vertex at level r

        Returns:
            (tree, sections) where sections[j-1] describes level j
        """
        sections = [self.sample_section(rng, j) for j in range(1, r + 1)]
        node: Tree = []
        for s in sections:
            node = list(s.left_trees) + [node] + list(s.right_trees)
        return node, sections

    def spine_margin(self, r: int) -> int:
        """
        Smallest margin whose truncation error is at most the sampler's tolerance

        Raises:
            ModelError: no margin up to max_margin is small enough, as at the critical point
        """
        if r in self._margins:
            return self._margins[r]
        hi = 1
        while spine_truncation_error(self.params, r, hi) > self.spine_tolerance:
            if hi >= self.max_margin:
                raise ModelError(
                    f"spine truncation error at r={r} stays above {self.spine_tolerance:g} "
                    f"up to margin {self.max_margin} ({self.params.describe()}); use the ball method")
            hi = min(2 * hi, self.max_margin)
        lo = hi // 2
        # error(lo) > tolerance >= error(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if spine_truncation_error(self.params, r, mid) > self.spine_tolerance:
                lo = mid
            else:
                hi = mid
        self._margins[r] = hi
        return hi

    def sample_tau0_by_spine(self, rng: Rng, r: int, margin: int | None = None) -> ReverseForest:
        """
        B_r(tau0) read inside d_{r+margin}

        Exact unless a tree grafted above level r+margin reaches reverse
        height r; by default the margin keeps that probability below the
        sampler's spine tolerance.
        """
        margin = self.spine_margin(r) if margin is None else margin
        top, sections = self.sample_spine(rng, r + margin)
        path = [0] + [s.L for s in reversed(sections)]
        whole = ReverseForest.from_trees([top], r + margin, path)
        ball = whole.ball(r)
        return _forest_from_trees(ball.to_trees(), r)


def sample_reverse_tree(params: ModelParams, r: int, variant: Variant, rng: Rng,
                        method: Method = BALL, sampler: "ReverseTreeSampler | None" = None) -> ReverseForest:
    """
    Ball of radius r of a reverse tree

    Args:
        params: model parameters
        r: radius, r >= 0
        variant: "tau0", "tau1" or "tau1star"
        rng: random stream
        method: "ball" (exact, via the law of Y(r)) or "spine" (tau0 only)
        sampler: reuse cached kernels

    Returns:
        The ball as a forest whose distinguished vertex is the leftmost one at reverse height 0
    """
    if r < 0:
        raise SamplerError(f"radius must be nonnegative, got {r}")
    sampler = sampler or ReverseTreeSampler(params)
    if method == SPINE:
        if variant != TAU0:
            raise SamplerError("the spine construction samples tau0 only")
        return sampler.sample_tau0_by_spine(rng, r)
    if variant == TAU0:
        return sampler.sample_tau0(rng, r)
    if variant == TAU1:
        return sampler.sample_tau1(rng, r)
    if variant == TAU1_STAR:
        return sampler.sample_tau1_star(rng, r)
    raise SamplerError(f"unknown reverse tree variant '{variant}'")
