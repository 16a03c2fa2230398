"""
Tests for leftmost geodesics, geodesic trees and slicing
"""

import pytest

from geodesics.leftmost import GeodesicError, leftmost_geodesic
from geodesics.slicing import glue_slices, slice_map
from geodesics.tree import geodesic_tree, hull_block_leaves, skeleton_geodesic_tree, top_vertices
from planarmap.distances import distances, skipped_darts
from planarmap.hull import top_perimeter
from planarmap.map import TOP
from planarmap.root_transform import root_transform
from planarmap.validate import validate
from samplers.hull import sample_hull, sample_hull_skeleton
from skeleton.codec import decode

CORRESPONDENCE_SAMPLES = 15
LEFTMOST_ATTEMPTS = 120
LEFTMOST_MAX_VERTICES = 24
MAX_GEODESICS = 40


def sampled_hull(params, r, rng):
    sample = sample_hull_skeleton(params, r, rng)
    return root_transform(decode(sample.skeleton)), sample


# ============================================================================
# Leftmost geodesics
# ============================================================================


def test_geodesic_lengths_match_distances(fifth, rng):
    pmap = sample_hull(fifth, 3, rng)
    dist = distances(pmap)
    root = pmap.origin(pmap.root)
    for v in range(pmap.num_vertices):
        path = leftmost_geodesic(pmap, v, dist)
        assert path.length == dist[v]
        assert path.target == v
        assert path.vertices[0] == root
        assert [dist[u] for u in path.vertices] == list(range(dist[v] + 1))
        for d, (a, b) in zip(path.darts, zip(path.vertices, path.vertices[1:])):
            assert (pmap.origin(d), pmap.target(d)) == (a, b)


def test_geodesic_to_root_is_empty(fifth, rng):
    pmap = sample_hull(fifth, 2, rng)
    path = leftmost_geodesic(pmap, pmap.origin(pmap.root))
    assert path.length == 0
    assert path.vertices == [pmap.origin(pmap.root)]


def test_geodesic_unknown_vertex(fifth, rng):
    pmap = sample_hull(fifth, 2, rng)
    with pytest.raises(GeodesicError):
        leftmost_geodesic(pmap, pmap.num_vertices)


def all_geodesics(pmap, dist, skip, v):
    """Every geodesic from the root vertex to v, as upward dart lists"""
    paths = []
    stack = [(v, [])]
    while stack:
        u, down = stack.pop()
        if dist[u] == 0:
            paths.append([pmap.alpha[d] for d in reversed(down)])
            continue
        for d in pmap.rotation(pmap.vertex_darts[u]):
            if d not in skip and dist[pmap.target(d)] == dist[u] - 1:
                stack.append((pmap.target(d), down + [d]))
    return paths


def divergences(pmap, path, other):
    """Dart ranges [a, b) where the two paths leave each other and meet again"""
    start = 0
    for k in range(1, len(path) + 1):
        if pmap.target(path[k - 1]) == pmap.target(other[k - 1]):
            if path[start:k] != other[start:k]:
                yield start, k
            start = k


def left_side_reaches_top(pmap, face_darts, path, other, a, b):
    """Whether the faces left of path[a:b] reach the top hole without crossing the cycle closed by other[a:b]"""
    walls = set(path[a:b]) | set(other[a:b])
    walls |= {pmap.alpha[d] for d in walls}
    top = pmap.face_of[pmap.holes[TOP]]
    seen = {pmap.face_of[pmap.alpha[path[a]]]}
    queue = list(seen)
    while queue:
        f = queue.pop()
        if f == top:
            return True
        for d in face_darts[f]:
            g = pmap.face_of[pmap.alpha[d]]
            if d not in walls and g not in seen:
                seen.add(g)
                queue.append(g)
    return False


def test_leftmost_geodesic_is_the_only_one_with_the_top_on_its_left(fifth, rng):
    maps, checked = 0, 0
    for attempt in range(LEFTMOST_ATTEMPTS):
        pmap = sample_hull(fifth, 2 + attempt % 2, rng)
        if pmap.num_vertices > LEFTMOST_MAX_VERTICES:
            continue
        maps += 1
        dist = distances(pmap)
        skip = skipped_darts(pmap)
        face_darts = {}
        for d in range(pmap.num_darts):
            face_darts.setdefault(pmap.face_of[d], []).append(d)
        for v in top_vertices(pmap):
            paths = all_geodesics(pmap, dist, skip, v)
            if len(paths) > MAX_GEODESICS:
                continue
            leftmost = [
                p for p in paths
                if all(left_side_reaches_top(pmap, face_darts, p, q, a, b)
                       for q in paths if q != p
                       for a, b in divergences(pmap, p, q))
            ]
            assert leftmost == [leftmost_geodesic(pmap, v, dist).darts]
            checked += len(paths) > 1
    assert maps >= 10
    assert checked > 0


# ============================================================================
# Geodesic trees
# ============================================================================


def test_tree_matches_sampled_genealogy(fifth, rng):
    for _ in range(CORRESPONDENCE_SAMPLES):
        pmap, sample = sampled_hull(fifth, 4, rng)
        tree = skeleton_geodesic_tree(pmap, sample)
        assert tree.isomorphic(sample.u), f"{tree.to_string()} != {sample.u.to_string()}"


def test_critical_tree_is_a_path(critical, rng):
    for _ in range(5):
        pmap, sample = sampled_hull(critical, 3, rng)
        assert len(hull_block_leaves(pmap, sample)) == 1
        assert skeleton_geodesic_tree(pmap, sample).is_path()


def test_full_boundary_tree(fifth, rng):
    pmap = sample_hull(fifth, 3, rng)
    dist = distances(pmap)
    tree = geodesic_tree(pmap, 3, dist=dist)
    assert {tree.vertices[v] for v in tree.nodes_at(3)} == set(top_vertices(pmap))
    for node in range(1, len(tree)):
        down = tree.edges[node]
        assert pmap.origin(down) == tree.vertices[node]
        assert dist[pmap.target(down)] == tree.heights[node] - 1


def test_inner_hull_tree(fifth, rng):
    pmap = sample_hull(fifth, 4, rng)
    tree = geodesic_tree(pmap, 2)
    assert tree.height == 2
    assert all(tree.heights[v] == 2 for v in tree.leaves())


def test_tree_errors(fifth, rng):
    pmap = sample_hull(fifth, 3, rng)
    dist = distances(pmap)
    with pytest.raises(GeodesicError):
        geodesic_tree(pmap, 4, dist=dist)
    near = next(v for v in range(pmap.num_vertices) if dist[v] == 1)
    far = top_vertices(pmap)[0]
    with pytest.raises(GeodesicError):
        geodesic_tree(pmap, 3, leaves=[far, near], dist=dist)
    with pytest.raises(GeodesicError):
        geodesic_tree(pmap, 3, leaves=[], dist=dist)


# ============================================================================
# Slicing
# ============================================================================


def test_slices_glue_back(fifth, rng):
    for r in (2, 3):
        pmap = sample_hull(fifth, r, rng)
        tree = geodesic_tree(pmap, r)
        slices = slice_map(pmap, tree)
        assert len(slices) == len(tree.nodes_at(r))
        assert all(s.top_edges >= 1 for s in slices)
        assert sum(s.top_edges for s in slices) == top_perimeter(pmap)
        for s in slices:
            assert validate(s.map).passed
        assert glue_slices(slices).same_as(pmap)


def test_slicing_needs_plane_form(fifth, rng):
    sample = sample_hull_skeleton(fifth, 2, rng)
    cylinder = decode(sample.skeleton)
    with pytest.raises(GeodesicError):
        slice_map(cylinder, sample.u)
    with pytest.raises(GeodesicError):
        glue_slices([])
