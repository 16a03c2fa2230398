"""
Tests for maps, validation, distances, hulls, the root transformation and map files
"""

import pytest

from planarmap.builder import MapBuilder
from planarmap.distances import distances
from planarmap.enumeration import triangulations
from planarmap.hull import hull, map_height, top_perimeter
from planarmap.map import BOTTOM, OUTER, TOP, MapError, PlanarMap, degenerate_disk
from planarmap.mapfile import HEADER, dumps, loads, read_map, save_map
from planarmap.root_transform import inverse_root_transform, root_transform
from planarmap.validate import validate
from samplers.disk import sample_boltzmann_disk
from samplers.halfplane import sample_halfplane_ball
from samplers.hull import sample_hull, sample_hull_skeleton
from skeleton.codec import decode

ROUND_TRIPS = 25


def single_triangle() -> PlanarMap:
    builder = MapBuilder()
    chain = builder.outer_face(3)
    builder.close_hole(chain)
    return builder.build(chain[0])


def quadrilateral() -> PlanarMap:
    builder = MapBuilder()
    chain = builder.outer_face(4)
    builder.close_hole(chain)
    return builder.build(chain[0])


# ============================================================================
# Validation
# ============================================================================


def test_single_triangle_is_valid():
    report = validate(single_triangle())
    assert report.passed, report.summary()


def test_quadrilateral_face_fails():
    report = validate(quadrilateral())
    assert not report.passed
    assert report.failures[0].check == "triangles"
    assert "non-triangle inner face" in report.failures[0].message


def test_broken_involution_fails():
    pmap = single_triangle()
    pmap.alpha[0] = 0
    assert validate(pmap).failures[0].check == "involution"


def test_degenerate_disk_is_valid():
    pmap = degenerate_disk()
    assert validate(pmap).passed
    assert pmap.perimeter(OUTER) == 2


@pytest.mark.parametrize("n, p", [(2, 1), (1, 3), (2, 2)])
def test_enumerated_triangulations_are_valid(n, p):
    for pmap in triangulations(n, p):
        report = validate(pmap)
        assert report.passed, report.summary()
        assert pmap.perimeter(OUTER) == p


def test_euler_formula_on_sampled_disks(eighth, rng):
    for p in (1, 2, 5):
        disk = sample_boltzmann_disk(eighth, p, rng)
        assert disk.euler_characteristic() == 2
        assert validate(disk).passed


def test_halfplane_ball_is_valid(critical, rng):
    ball, log = sample_halfplane_ball(critical, 20, rng)
    assert len(log) == 20
    assert validate(ball).passed
    assert BOTTOM in ball.holes and TOP in ball.holes


# ============================================================================
# Distances
# ============================================================================


def test_distances_single_triangle():
    pmap = single_triangle()
    dist = distances(pmap)
    root = pmap.origin(pmap.root)
    assert dist[root] == 0
    assert sorted(dist.values) == [0, 1, 1]


def test_distances_disconnected():
    pmap = PlanarMap(alpha=[1, 0, 3, 2], phi=[1, 0, 3, 2], root=0)
    with pytest.raises(MapError):
        distances(pmap)


def test_cylinder_top_at_constant_distance(fifth, rng):
    for _ in range(5):
        cylinder = decode(sample_hull_skeleton(fifth, 4, rng).skeleton)
        dist = distances(cylinder, BOTTOM)
        assert {dist.of_dart(cylinder, d) for d in cylinder.hole_cycle(TOP)} == {4}
        assert dist.is_lipschitz(cylinder)


# ============================================================================
# Hulls
# ============================================================================


def test_hull_at_full_height_is_identity(fifth, rng):
    pmap = sample_hull(fifth, 4, rng)
    dist = distances(pmap)
    assert map_height(pmap, dist) == 4
    assert hull(pmap, 4).same_as(pmap)


def test_hulls_are_consistent(fifth, rng):
    pmap = sample_hull(fifth, 5, rng)
    inner = hull(pmap, 3)
    assert validate(inner).passed
    assert hull(inner, 2).same_as(hull(pmap, 2))
    dist = distances(inner)
    assert {dist.of_dart(inner, d) for d in inner.hole_cycle(TOP)} == {3}


def test_hull_radius_too_large(fifth, rng):
    pmap = sample_hull(fifth, 3, rng)
    with pytest.raises(MapError):
        hull(pmap, 4)


# ============================================================================
# Root transformation
# ============================================================================


def test_root_transform_round_trip(fifth, rng):
    for _ in range(ROUND_TRIPS):
        cylinder = decode(sample_hull_skeleton(fifth, 3, rng).skeleton)
        plane = root_transform(cylinder)
        assert plane.num_vertices == cylinder.num_vertices
        assert plane.num_edges == cylinder.num_edges - 2
        assert plane.num_faces == cylinder.num_faces - 2
        assert BOTTOM not in plane.holes
        assert inverse_root_transform(plane).same_as(cylinder)
        assert validate(plane).passed


def test_root_transform_needs_loop():
    with pytest.raises(MapError):
        root_transform(single_triangle())


# ============================================================================
# Map files
# ============================================================================


def test_map_file_round_trip(fifth, rng, tmp_path):
    pmap = sample_hull(fifth, 3, rng)
    path = save_map(pmap, str(tmp_path / "hull.map"))
    again = read_map(path)
    assert again.alpha == pmap.alpha
    assert again.phi == pmap.phi
    assert again.root == pmap.root
    assert again.holes == pmap.holes
    assert top_perimeter(again) == top_perimeter(pmap)


def test_map_file_header():
    text = dumps(single_triangle())
    assert text.startswith(HEADER)
    with pytest.raises(MapError):
        loads("not-a-map darts 3 root 0\n")
