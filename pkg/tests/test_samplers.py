"""
Tests for the exact samplers: disks, peeling, GW trees, reverse trees, skeletons, hulls and strips
"""

import math

import numpy as np
import pytest

from experiments.stats import chi_square_discrete, mean_estimate, proportion_pvalue
from experiments.verify import disk_size_law
from model.formulas import (
    disk_weight,
    g_iter,
    h_weights,
    height_survival,
    mean_y0,
    spine_truncation_error,
    theta_array,
    y_law,
)
from model.params import ModelError
from planarmap.distances import distances
from planarmap.map import TOP
from planarmap.mapfile import dumps
from planarmap.validate import validate
from samplers.disk import DiskSampler, inner_vertex_count, sample_boltzmann_disk
from samplers.gw import AT_MOST, EXACTLY, GaltonWatson, sample_gw_height_conditioned, tree_height
from samplers.halfplane import CASE_FRESH, sample_halfplane_ball
from samplers.hull import sample_hull, sample_hull_skeleton
from samplers.reverse_tree import (
    SPINE,
    SPINE_TOLERANCE,
    TAU0,
    TAU1,
    TAU1_STAR,
    ReverseTreeSampler,
    sample_reverse_tree,
)
from samplers.rng import (
    RejectionBudgetExceeded,
    SamplerError,
    SizeCapExceeded,
    make_rng,
    seed_sequences,
)
from samplers.skeleton_f import sample_geodesic_tree, sample_skeleton_F
from samplers.strip import sample_strip

# fixed seeds: a failing p-value here is a bug, not bad luck
PVALUE_FLOOR = 1e-4


# ============================================================================
# Random streams
# ============================================================================


def test_same_seed_same_hull(fifth):
    a = sample_hull(fifth, 3, make_rng(11))
    b = sample_hull(fifth, 3, make_rng(11))
    assert dumps(a) == dumps(b)


def test_seed_sequences_are_reproducible():
    a = [make_rng(s).integers(1 << 30) for s in seed_sequences(3, 4)]
    b = [make_rng(s).integers(1 << 30) for s in seed_sequences(3, 4)]
    assert a == b
    assert len(set(a)) == 4


# ============================================================================
# Boltzmann disks
# ============================================================================


@pytest.mark.parametrize("p", [1, 2, 3, 10, 40])
def test_transition_weights_sum_to_one(eighth, critical, p):
    for params in (eighth, critical):
        weights = DiskSampler(params).transition_weights(p)
        assert weights.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(weights >= 0)


def test_degenerate_disk_frequency(eighth, rng):
    sampler = DiskSampler(eighth)
    trials = 4000
    hits = sum(1 for _ in range(trials) if sampler.sample(2, rng).num_darts == 2)
    assert proportion_pvalue(hits, trials, 1 / disk_weight(eighth, 2)) > PVALUE_FLOOR


def test_disk_size_law(eighth, rng):
    sampler = DiskSampler(eighth)
    sizes = [inner_vertex_count(sampler.sample(3, rng)) for _ in range(3000)]
    chi = chi_square_discrete(sizes, disk_size_law(eighth, 3))
    assert chi.pvalue > PVALUE_FLOOR


def test_disk_errors(eighth, rng):
    with pytest.raises(SamplerError):
        sample_boltzmann_disk(eighth, 0, rng)
    with pytest.raises(SizeCapExceeded):
        sample_boltzmann_disk(eighth, 50, rng, size_cap=10)


# ============================================================================
# Half-plane peeling
# ============================================================================


def test_fresh_vertex_frequency(eighth, rng):
    steps = 3000
    _, log = sample_halfplane_ball(eighth, steps, rng)
    fresh = sum(1 for case, _ in log if case == CASE_FRESH)
    assert proportion_pvalue(fresh, steps, 1 / math.sqrt(1 + 8 * eighth.h)) > PVALUE_FLOOR


# ============================================================================
# Galton-Watson trees
# ============================================================================


def test_height_zero_is_a_single_root(fifth, rng):
    assert sample_gw_height_conditioned(fifth, 0, AT_MOST, rng) == []
    assert sample_gw_height_conditioned(fifth, 0, EXACTLY, rng) == []


@pytest.mark.parametrize("mode", [AT_MOST, EXACTLY])
def test_conditioned_heights(fifth, rng, mode):
    gw = GaltonWatson(fifth)
    for _ in range(200):
        height = tree_height(gw.sample(rng, 3, mode))
        if mode == EXACTLY:
            assert height == 3
        else:
            assert height <= 3


def test_negative_height_bound(fifth, rng):
    with pytest.raises(SamplerError):
        GaltonWatson(fifth).sample(rng, -1)


def test_unconditioned_height_law(fifth, rng):
    cap = 40
    gw = GaltonWatson(fifth)
    heights = [gw.sample_height(rng, cap) for _ in range(5000)]
    survival = height_survival(fifth, cap + 1)
    probs = survival[:-1] - survival[1:]
    assert chi_square_discrete(heights, probs).pvalue > PVALUE_FLOOR


# ============================================================================
# Reverse trees
# ============================================================================


def test_tau0_ball_shape(fifth, rng):
    sampler = ReverseTreeSampler(fifth)
    for r in range(4):
        ball = sampler.sample_tau0(rng, r)
        assert ball.height == r
        assert ball.bottom_size >= 1
        assert ball.reverse_height(ball.distinguished) == 0


def test_tau1_has_a_single_bottom_vertex(fifth, rng):
    sampler = ReverseTreeSampler(fifth)
    for _ in range(20):
        assert sampler.sample_tau1(rng, 3).bottom_size == 1
    assert 0 < sampler.acceptance_rate <= 1


def test_tau1_star_drops_the_bottom(fifth, rng):
    ball = sample_reverse_tree(fifth, 3, TAU1_STAR, rng)
    assert ball.height == 3
    assert ball.bottom_size >= 1


def test_y_law_of_tau0(fifth, rng):
    sampler = ReverseTreeSampler(fifth)
    counts = [sampler.sample_tau0(rng, 2).num_trees for _ in range(2000)]
    chi = chi_square_discrete(counts, y_law(fifth, 2, 400))
    assert chi.pvalue > PVALUE_FLOOR


def test_bottom_level_mean(fifth, rng):
    """Y(0) read off balls of any radius has mean theta0 Pi'(theta0) / Pi(theta0)"""
    law = y_law(fifth, 0, 400)
    assert (np.arange(len(law)) * law).sum() == pytest.approx(mean_y0(fifth), rel=1e-6)
    sampler = ReverseTreeSampler(fifth)
    est = mean_estimate([sampler.sample_tau0(rng, 2).bottom_size for _ in range(3000)])
    assert abs(est.zscore(mean_y0(fifth))) < 4


def test_spine_method(fifth, rng):
    ball = sample_reverse_tree(fifth, 3, TAU0, rng, method=SPINE)
    assert ball.height == 3
    _, sections = ReverseTreeSampler(fifth).sample_spine(rng, 4)
    assert [s.level for s in sections] == [1, 2, 3, 4]
    assert all(s.L >= 0 and s.R >= 0 for s in sections)
    assert len(sections[2].left_trees) == sections[2].L


def test_reverse_tree_errors(fifth, rng):
    with pytest.raises(SamplerError):
        sample_reverse_tree(fifth, -1, TAU0, rng)
    with pytest.raises(SamplerError):
        sample_reverse_tree(fifth, 2, TAU1, rng, method=SPINE)
    with pytest.raises(SamplerError):
        sample_reverse_tree(fifth, 2, "tau2", rng)
    with pytest.raises(RejectionBudgetExceeded):
        ReverseTreeSampler(fifth, rejection_budget=0).sample_tau1(rng, 2)


def test_spine_margin_meets_the_tolerance(eighth):
    sampler = ReverseTreeSampler(eighth)
    for r in (0, 2, 4):
        margin = sampler.spine_margin(r)
        assert spine_truncation_error(eighth, r, margin) <= SPINE_TOLERANCE
        if margin > 1:
            assert spine_truncation_error(eighth, r, margin - 1) > SPINE_TOLERANCE


def test_spine_margin_at_the_critical_point(critical, rng):
    sampler = ReverseTreeSampler(critical, max_margin=64)
    with pytest.raises(ModelError):
        sampler.spine_margin(2)
    with pytest.raises(ModelError):
        sample_reverse_tree(critical, 2, TAU0, rng, method=SPINE, sampler=sampler)


def test_spine_y_law(eighth, rng):
    sampler = ReverseTreeSampler(eighth)
    counts = [sampler.sample_tau0_by_spine(rng, 2).num_trees for _ in range(2000)]
    assert chi_square_discrete(counts, y_law(eighth, 2, 400)).pvalue > PVALUE_FLOOR


# ============================================================================
# Exact laws of small balls
# ============================================================================

BALL_SHAPES = [(1,), (2,), (1, 0), (0, 1)]


def test_tau0_ball_law_at_radius_one(fifth, rng):
    """B_1(tau0) with at most three vertices, keyed by the child counts of its roots"""
    th = theta_array(fifth, 2)
    g1, g2 = float(g_iter(fifth, 1, 0.0)), float(g_iter(fifth, 2, 0.0))
    ylaw = y_law(fifth, 1, 2)

    def probability(shape):
        p = len(shape)
        return ylaw[p] * np.prod([th[c] * g1 ** c for c in shape]) / (g2 ** p - g1 ** p)

    probs = np.array([probability(s) for s in BALL_SHAPES])
    sampler = ReverseTreeSampler(fifth)
    draws = []
    for _ in range(5000):
        shape = tuple(len(t) for t in sampler.sample_tau0(rng, 1).to_trees())
        draws.append(BALL_SHAPES.index(shape) if shape in BALL_SHAPES else len(BALL_SHAPES))
    assert chi_square_discrete(draws, probs).pvalue > PVALUE_FLOOR
    freq = np.bincount(draws, minlength=len(BALL_SHAPES) + 1) / len(draws)
    tv = 0.5 * np.abs(freq - np.append(probs, 1 - probs.sum())).sum()
    assert tv < 0.03


@pytest.mark.parametrize("mode", [AT_MOST, EXACTLY])
def test_root_offspring_kernel(fifth, rng, mode):
    r = 2
    G = [float(g_iter(fifth, j, 0.0)) for j in range(r + 2)]
    k = np.arange(81)
    th = theta_array(fifth, 80)
    if mode == AT_MOST:
        law = th * G[r] ** k / G[r + 1]
    else:
        law = th * (G[r] ** k - G[r - 1] ** k) / (G[r + 1] - G[r])
    assert law.sum() == pytest.approx(1.0, abs=1e-6)
    gw = GaltonWatson(fifth)
    counts = [len(gw.sample(rng, r, mode)) for _ in range(4000)]
    assert chi_square_discrete(counts, law).pvalue > PVALUE_FLOOR


def test_hull_skeleton_law_at_radius_one(fifth, rng):
    """q roots, the first one carrying the bottom vertex, with probability q h(q) theta(1) theta(0)^(q-1) / h(1)"""
    qmax = 200
    hw = h_weights(fifth, qmax)
    th = theta_array(fifth, 1)
    q = np.arange(qmax + 1)
    law = q * hw * th[1] * th[0] ** np.maximum(q - 1, 0) / hw[1]
    assert law.sum() == pytest.approx(1.0, abs=1e-6)
    sizes = []
    for _ in range(3000):
        forest = sample_hull_skeleton(fifth, 1, rng).skeleton.forest
        assert [forest.num_children(v) for v in forest.roots] == [1] + [0] * (forest.num_trees - 1)
        sizes.append(forest.num_trees)
    assert chi_square_discrete(sizes, law).pvalue > PVALUE_FLOOR


def test_tau1_star_is_tau0_biased_by_bottom_size(fifth, rng):
    """E[Y(1)] under tau1* equals E[Y(0) Y(1)] / E[Y(0)] under tau0"""
    sampler = ReverseTreeSampler(fifth)
    y0 = mean_y0(fifth)
    biased = mean_estimate([
        ball.bottom_size * ball.num_trees / y0
        for ball in (sampler.sample_tau0(rng, 1) for _ in range(4000))
    ])
    direct = mean_estimate([sampler.sample_tau1_star(rng, 1).num_trees for _ in range(2000)])
    z = (direct.mean - biased.mean) / math.hypot(direct.stderr, biased.stderr)
    assert abs(z) < 4
    assert sampler.acceptance_rate == pytest.approx(y_law(fifth, 0, 1)[1], abs=0.05)


# ============================================================================
# Skeleton of the plane and hulls
# ============================================================================


def test_geodesic_tree_reaches_every_level(fifth, rng):
    for _ in range(20):
        tree = sample_geodesic_tree(fifth, 4, rng)
        assert len(tree.nodes_at(0)) == 1
        for j in range(1, 5):
            assert len(tree.nodes_at(j)) >= len(tree.nodes_at(j - 1))
        assert max(tree.heights) == 4


def test_critical_skeleton_is_one_block(critical, rng):
    forest, sizes, u = sample_skeleton_F(critical, 3, rng)
    assert u.is_path()
    assert len(sizes) == 1
    assert sizes[0] == forest.num_trees


def test_skeleton_blocks_follow_u(fifth, rng):
    for _ in range(10):
        forest, sizes, u = sample_skeleton_F(fifth, 4, rng)
        assert len(sizes) == len(u.nodes_at(4))
        assert sum(sizes) == forest.num_trees


def test_hull_is_valid_with_top_at_radius(fifth, rng):
    for r in (1, 2, 4):
        pmap = sample_hull(fifth, r, rng)
        assert validate(pmap).passed
        dist = distances(pmap)
        assert {dist.of_dart(pmap, d) for d in pmap.hole_cycle(TOP)} == {r}


def test_hull_skeleton_radius(fifth, rng):
    with pytest.raises(SamplerError):
        sample_hull_skeleton(fifth, 0, rng)


def test_strip_errors(eighth, rng):
    with pytest.raises(SamplerError):
        sample_strip(eighth, "S2", 3, rng)
    with pytest.raises(SamplerError):
        sample_strip(eighth, "S0", 0, rng)
