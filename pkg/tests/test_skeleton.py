"""
Tests for reverse forests, the skeleton codec and the genealogy tree U
"""

import itertools
import os

import pytest

from planarmap.distances import distances
from planarmap.enumeration import triangulations
from planarmap.map import BOTTOM, TOP, degenerate_disk
from planarmap.mapfile import read_map
from planarmap.validate import validate
from samplers.hull import sample_hull_skeleton
from samplers.strip import sample_strip
from skeleton.codec import (
    CYLINDER,
    GAMMA_LEFT,
    GAMMA_RIGHT,
    STRIP,
    SkeletonDecomposition,
    decode,
    encode,
    load_skeleton,
    save_skeleton,
    top_chain,
)
from skeleton.forest import CodecError, ReverseForest, dumps_forest, loads_forest, parse_trees, tree_to_string
from skeleton.utree import (
    GeodesicTree,
    block_heights,
    dumps_geodesic_tree,
    heights_from_tree,
    loads_geodesic_tree,
    parse_geodesic_tree,
    u_tree,
)

SAMPLED_ROUND_TRIPS = 30


def path_forest(r: int) -> ReverseForest:
    tree: list = []
    for _ in range(r):
        tree = [tree]
    return ReverseForest.from_trees([tree], r, [0] + [0] * r)


def triangle():
    return next(iter(triangulations(0, 3)))


# ============================================================================
# Forests
# ============================================================================


def test_parse_trees_round_trip():
    text = "(()())(())()"
    trees = parse_trees(text)
    assert len(trees) == 3
    assert "".join(tree_to_string(t) for t in trees) == text


def test_parse_trees_unbalanced():
    with pytest.raises(CodecError):
        parse_trees("(()")
    with pytest.raises(CodecError):
        parse_trees("())")


def test_forest_file_round_trip():
    forest = ReverseForest.from_trees([[[[]], []], [[]]], 2, [0, 0, 0])
    again = loads_forest(dumps_forest(forest))
    assert again == forest
    assert again.bottom_size == 1
    assert again.num_trees == 2


def test_ball_of_ball(eighth, rng):
    sample = sample_hull_skeleton(eighth, 4, rng)
    forest = sample.skeleton.forest
    for s in range(1, 5):
        for r in range(0, s + 1):
            assert forest.ball(s).ball(r) == forest.ball(r)


def test_reordered_ball_is_admissible(fifth, rng):
    sample = sample_hull_skeleton(fifth, 4, rng)
    for r in range(1, 5):
        ball = sample.skeleton.forest.reordered_ball(r)
        assert ball.is_admissible()
        assert ball.height == r


def test_ball_radius_out_of_range():
    with pytest.raises(CodecError):
        path_forest(2).ball(3)


# ============================================================================
# Codec
# ============================================================================


def test_minimal_cylinder():
    """A single path with triangle fillings decodes to a valid cylinder of height r"""
    r = 3
    forest = path_forest(r)
    sk = SkeletonDecomposition(forest, {v: triangle() for v in forest.inner_vertices()}, CYLINDER)
    cylinder = decode(sk)
    assert validate(cylinder).passed
    assert cylinder.perimeter(BOTTOM) == 1
    assert cylinder.perimeter(TOP) == 1
    assert encode(cylinder).same_as(sk)


def test_degenerate_fillings():
    """A leaf at positive reverse height takes the single-edge 2-gon"""
    forest = ReverseForest.from_trees([[[]], []], 1, [0, 0])
    sk = SkeletonDecomposition(forest, {0: triangle(), 2: degenerate_disk()}, CYLINDER)
    cylinder = decode(sk)
    assert validate(cylinder).passed
    assert cylinder.perimeter(TOP) == 2
    assert cylinder.perimeter(BOTTOM) == 1
    assert encode(cylinder).same_as(sk)


def _height_one_skeletons(max_total: int):
    """Every admissible height-1 skeleton with p + q <= max_total and fillings of at most one inner vertex"""
    polygons = {c: [m for n in (0, 1) for m in triangulations(n, c + 2)] for c in range(max_total)}
    for q in range(1, max_total):
        for counts in itertools.product(range(max_total), repeat=q):
            p = sum(counts)
            if counts[0] == 0 or p + q > max_total:
                continue
            trees = [[[] for _ in range(c)] for c in counts]
            options = [polygons[c] for c in counts]
            for first in range(counts[0]):
                forest = ReverseForest.from_trees(trees, 1, [0, first])
                for choice in itertools.product(*options):
                    yield SkeletonDecomposition(forest, dict(zip(forest.roots, choice)), CYLINDER)


def test_height_one_cylinders_exhaustive():
    """decode and encode are inverse on every small height-1 skeleton"""
    count = 0
    for sk in _height_one_skeletons(6):
        cylinder = decode(sk)
        assert validate(cylinder).passed
        again = encode(cylinder)
        assert again.same_as(sk)
        assert decode(again).same_as(cylinder)
        count += 1
    assert count > 1000


def test_sampled_round_trip(fifth, rng):
    for _ in range(SAMPLED_ROUND_TRIPS):
        sk = sample_hull_skeleton(fifth, 3, rng).skeleton
        cylinder = decode(sk)
        assert validate(cylinder).passed
        assert encode(cylinder).same_as(sk)


def test_top_distance_and_perimeters(fifth, rng):
    sk = sample_hull_skeleton(fifth, 4, rng).skeleton
    cylinder = decode(sk)
    dist = distances(cylinder, BOTTOM)
    assert {dist.of_dart(cylinder, d) for d in top_chain(cylinder)} == {4}
    assert cylinder.perimeter(TOP) == sk.forest.num_trees
    assert cylinder.perimeter(BOTTOM) == sk.forest.bottom_size


def test_perimeter_mismatch():
    forest = path_forest(1)
    sk = SkeletonDecomposition(forest, {0: degenerate_disk()}, CYLINDER)
    with pytest.raises(CodecError):
        decode(sk)


def test_missing_filling():
    with pytest.raises(CodecError):
        SkeletonDecomposition(path_forest(2), {}, CYLINDER).check()


def test_encode_needs_cylinder():
    with pytest.raises(CodecError):
        encode(triangle())


def test_skeleton_files(fifth, rng, tmp_path):
    sk = sample_hull_skeleton(fifth, 3, rng).skeleton
    forest_path = str(tmp_path / "hull.forest")
    fills = str(tmp_path / "fills")
    save_skeleton(sk, forest_path, fills)
    again = load_skeleton(forest_path, fills)
    assert again.same_as(sk)
    assert decode(again).same_as(decode(sk))


def test_strip_sides_are_geodesics(eighth, rng):
    for variant in ("S0", "S1"):
        strip = sample_strip(eighth, variant, 4, rng)
        assert validate(strip).passed
        dist = distances(strip)
        for key in (GAMMA_LEFT, GAMMA_RIGHT):
            side = strip.marked[key]
            assert len(side) == 4
            ends = [sorted((dist[strip.origin(d)], dist[strip.target(d)])) for d in side]
            assert sorted(lo for lo, _ in ends) == [0, 1, 2, 3]
            assert all(hi == lo + 1 for lo, hi in ends)


def test_strip_mode_fills_every_vertex():
    forest = ReverseForest.from_trees([[]], 0, [0])
    sk = SkeletonDecomposition(forest, {0: degenerate_disk()}, STRIP)
    assert sk.filled_vertices() == [0]
    strip = decode(sk)
    assert validate(strip).passed


# ============================================================================
# Genealogy tree
# ============================================================================


def test_u_tree_single_block_is_path():
    forest = path_forest(3)
    tree = u_tree(forest, [1])
    assert tree.is_path()
    assert tree.isomorphic(GeodesicTree.path(3))


def test_u_tree_branches_off_the_left():
    forest = ReverseForest.from_trees([[[[]]], [[]]], 2, [0, 0, 0])
    tree = u_tree(forest, [1, 1])
    assert tree.to_string() == "(0(1(2))(1(2)))"
    assert heights_from_tree(tree, 2) == [2, 1]


def test_u_tree_partition_as_lists():
    forest = ReverseForest.from_trees([[[[]]], [[]], [[]]], 2, [0, 0, 0])
    assert u_tree(forest, [[0, 1], [2]]).isomorphic(u_tree(forest, [2, 1]))
    with pytest.raises(CodecError):
        u_tree(forest, [[0, 2], [1]])


def test_u_tree_alive_blocks(fifth, rng):
    """Nodes at height j are the blocks whose height reaches down to r - j"""
    sample = sample_hull_skeleton(fifth, 5, rng)
    forest = sample.skeleton.forest.rotate(-sample.offset % sample.skeleton.forest.num_trees)
    heights = block_heights(forest, sample.sizes)
    for j in range(6):
        alive = sum(1 for h in heights if h >= 5 - j)
        assert len(sample.u.nodes_at(j)) == alive


def test_heights_from_tree_inverts_u_tree():
    tree = parse_geodesic_tree("(0(1(2)(2))(1(2)))")
    heights = heights_from_tree(tree, 2)
    assert heights == [2, 0, 1]


def test_geodesic_tree_file_round_trip():
    tree = parse_geodesic_tree("(0(1(2)(2))(1(2)))")
    assert loads_geodesic_tree(dumps_geodesic_tree(tree)).isomorphic(tree)
    with pytest.raises(CodecError):
        loads_geodesic_tree("(0)")


# ============================================================================
# Hand-encoded examples
# ============================================================================

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def read_data(name: str) -> str:
    with open(os.path.join(DATA, name)) as f:
        return f.read()


def test_cylinder_skeleton_reads_trees_clockwise():
    """
    Top edges T0T1, T1T2, T2T0 in clockwise order have 1, 1 and 0 children

    Reading the trees counterclockwise would give (1, 0, 1) instead.
    """
    cylinder = read_map(os.path.join(DATA, "cylinder_h1.map"))
    assert validate(cylinder).passed
    expected = loads_forest(read_data("cylinder_h1.forest"))
    sk = encode(cylinder)
    assert sk.forest == expected
    assert dumps_forest(sk.forest) == read_data("cylinder_h1.forest")
    assert [sk.forest.num_children(v) for v in sk.forest.roots] == [1, 1, 0]
    assert sk.forest != ReverseForest.from_trees([[[]], [], [[]]], 1, [0, 0])


def test_cylinder_decodes_from_its_skeleton():
    cylinder = read_map(os.path.join(DATA, "cylinder_h1.map"))
    forest = loads_forest(read_data("cylinder_h1.forest"))
    t1, t2, t3 = forest.roots
    sk = SkeletonDecomposition(forest, {t1: triangle(), t2: triangle(), t3: degenerate_disk()}, CYLINDER)
    decoded = decode(sk)
    assert decoded.same_as(cylinder)
    assert encode(cylinder).same_as(sk)


def test_balls_of_three_trees():
    forest = loads_forest(read_data("three_trees.forest"))
    ball = forest.ball(2)
    assert dumps_forest(ball) == "hypermap-forest r 2\ntrees (())((()))()()(())\ndistinguished 1 0 0\n"
    reordered = forest.reordered_ball(2)
    assert dumps_forest(reordered) == "hypermap-forest r 2\ntrees ((()))()()(())(())\ndistinguished 0 0 0\n"
    assert forest.ball(3) == forest


def test_u_tree_of_four_blocks():
    forest = loads_forest(read_data("four_blocks.forest"))
    tree = u_tree(forest, [2, 1, 2, 1])
    assert tree.to_string() == "(0(1(2(3)))(1(2(3)))(1(2(3))(2(3))))"
    assert block_heights(forest, [2, 1, 2, 1]) == [3, 2, 2, 1]
    assert heights_from_tree(tree, 3) == [3, 2, 2, 1]
