"""
Geodesic Tree Extraction
Union of the leftmost geodesics from the top boundary of a hull to its root
"""

from typing import TYPE_CHECKING, Optional, Sequence

from geodesics.leftmost import GeodesicError, reference_dart, next_step
from planarmap.distances import DistanceField, distances, skipped_darts
from planarmap.hull import boundary_cycles, hull_region, map_height
from planarmap.map import TOP, PlanarMap
from skeleton.codec import top_chain
from skeleton.utree import GeodesicTree

if TYPE_CHECKING:
    from samplers.hull import HullSkeleton


def _boundary_references(pmap: PlanarMap, chain: list[int]) -> dict[int, int]:
    """Target of each chain dart, mapped to the opposite dart where its rotation starts"""
    out: dict[int, int] = {}
    for d in chain:
        out.setdefault(pmap.target(d), pmap.alpha[d])
    return out


def top_vertices(pmap: PlanarMap) -> list[int]:
    """Vertices of the top boundary, left to right, starting after the first top edge"""
    return list(_boundary_references(pmap, top_chain(pmap)))


def boundary_vertices(pmap: PlanarMap, r: int, dist: DistanceField) -> dict[int, int]:
    """Vertices on the boundary of the hull of radius r with their reference darts, left to right"""
    if TOP not in pmap.holes:
        raise GeodesicError("map has no top boundary")
    height = map_height(pmap, dist)
    if r > height:
        raise GeodesicError(f"radius {r} exceeds the hull height {height}")
    if r == height:
        return _boundary_references(pmap, top_chain(pmap))
    cycles = boundary_cycles(pmap, hull_region(pmap, dist, r))
    if len(cycles) != 1:
        raise GeodesicError(f"hull boundary at radius {r} splits into {len(cycles)} cycles")
    return _boundary_references(pmap, cycles[0])


def geodesic_tree(pmap: PlanarMap, r: Optional[int] = None, leaves: Optional[Sequence[int]] = None,
                  dist: Optional[DistanceField] = None) -> GeodesicTree:
    """
    Tree of the leftmost geodesics from a list of leaves down to the root vertex

    Leftmost geodesics coalesce, so the union is a tree. Children are
    ordered by the index of the first leaf whose geodesic passes through
    them, which makes the tree plane when the leaves are given left to right.

    Args:
        pmap: Plane map rooted at the centre; a hull in plane form
        r: Height of every leaf; defaults to the distance of the first leaf
        leaves: Vertex ids; defaults to the boundary vertices of the hull of radius r
        dist: Precomputed distances from the root vertex

    Returns:
        GeodesicTree carrying map vertices and the downward dart of every node
    """
    if dist is None:
        dist = distances(pmap, "root")
    references: dict[int, int] = {}
    if leaves is None:
        if TOP not in pmap.holes:
            raise GeodesicError("map has no top boundary and no leaves were given")
        if r is None:
            r = map_height(pmap, dist)
        references = boundary_vertices(pmap, r, dist)
        leaves = list(references)
    if not leaves:
        raise GeodesicError("no leaves")
    if r is None:
        r = dist[leaves[0]]
    far = [v for v in leaves if dist[v] != r]
    if far:
        raise GeodesicError(f"{len(far)} leaves are not at distance {r}, e.g. vertex {far[0]} at {dist[far[0]]}")

    skip = skipped_darts(pmap)
    root_vertex = pmap.origin(pmap.root)
    node_of = {root_vertex: 0}
    children: list[list[int]] = [[]]
    heights, vertices, edges = [0], [root_vertex], [None]

    def add(v: int, down: Optional[int]) -> int:
        node_of[v] = len(vertices)
        children.append([])
        heights.append(dist[v])
        vertices.append(v)
        edges.append(down)
        return node_of[v]

    for leaf in leaves:
        if leaf in node_of:
            continue
        v = leaf
        ref = references[leaf] if leaf in references else reference_dart(pmap, leaf)
        pending: list[int] = []
        while v not in node_of:
            step = next_step(pmap, dist, ref, skip)
            if step is None:
                raise GeodesicError(f"no downward dart at vertex {v} (distance {dist[v]})")
            pending.append(add(v, step))
            ref = pmap.alpha[step]
            v = pmap.target(step)
        # attach the new branch top-down so that children keep first-leaf order
        below = node_of[v]
        for node in reversed(pending):
            children[below].append(node)
            below = node
    return GeodesicTree(children, heights, 0, vertices, edges)


def hull_block_leaves(pmap: PlanarMap, sample: "HullSkeleton") -> list[int]:
    """Top vertices ending each block of the sampled skeleton, in block order"""
    chain = top_chain(pmap)
    return [pmap.target(chain[k]) for k in sample.block_ends()]


def skeleton_geodesic_tree(pmap: PlanarMap, sample: "HullSkeleton") -> GeodesicTree:
    """Geodesic tree of the block-ending vertices; isomorphic to the sampled genealogy"""
    return geodesic_tree(pmap, sample.skeleton.forest.height, hull_block_leaves(pmap, sample))
