"""
Leftmost Geodesics
Deterministic geodesic paths from a vertex down to the root vertex
"""

from typing import Optional

from pydantic import BaseModel

from planarmap.distances import DistanceField, distances, skipped_darts
from planarmap.map import PlanarMap


class GeodesicError(ValueError):
    """Raised when a geodesic cannot be traced in a map"""


class GeodesicPath(BaseModel):
    """Vertices from the root to the target and the dart used at each step (oriented upwards)"""

    vertices: list[int]
    darts: list[int]

    @property
    def length(self) -> int:
        return len(self.darts)

    @property
    def target(self) -> int:
        return self.vertices[-1]


def reference_dart(pmap: PlanarMap, v: int) -> int:
    """
    Dart at v from which the rotation starts when no step has been taken yet

    A dart of a hole face with origin v when there is one (the top boundary
    of a hull), otherwise the smallest dart at v.
    """
    hole_faces = pmap.hole_faces()
    start = pmap.vertex_darts[v]
    for d in pmap.rotation(start):
        if pmap.face_of[d] in hole_faces:
            return d
    return start


def next_step(pmap: PlanarMap, dist: DistanceField, ref: int, skip: set[int]) -> Optional[int]:
    """First dart counterclockwise after ref whose target is one step closer to the root"""
    level = dist.of_dart(pmap, ref)
    e = ref
    for _ in range(pmap.num_darts):
        e = pmap.sigma(e)
        if e not in skip and dist[pmap.target(e)] == level - 1:
            return e
        if e == ref:
            break
    return None


def walk_down(pmap: PlanarMap, target: int, dist: DistanceField):
    """Yield the downward darts of the leftmost geodesic from target, in walking order"""
    skip = skipped_darts(pmap)
    ref = reference_dart(pmap, target)
    for _ in range(dist[target]):
        step = next_step(pmap, dist, ref, skip)
        if step is None:
            raise GeodesicError(f"no downward dart at vertex {pmap.origin(ref)} (distance {dist.of_dart(pmap, ref)})")
        yield step
        ref = pmap.alpha[step]


def leftmost_geodesic(pmap: PlanarMap, target: int, dist: Optional[DistanceField] = None) -> GeodesicPath:
    """
    Leftmost geodesic from the root vertex to target

    The path is traced from the target downwards: at each vertex the
    rotation starts from the dart pointing back to where the walk came from
    (or from reference_dart at the target) and the first neighbour at
    distance one less is taken.

    Args:
        pmap: Map; distances are measured from the origin of its root
        target: Vertex id
        dist: Precomputed distances from the root vertex

    Returns:
        GeodesicPath of length dist[target]
    """
    if not 0 <= target < pmap.num_vertices:
        raise GeodesicError(f"vertex {target} not in map with {pmap.num_vertices} vertices")
    if dist is None:
        dist = distances(pmap, "root")
    down = list(walk_down(pmap, target, dist))
    darts = [pmap.alpha[d] for d in reversed(down)]
    vertices = [pmap.origin(pmap.root)] + [pmap.target(d) for d in darts]
    if vertices[0] not in dist.sources or (down and pmap.target(down[-1]) != vertices[0]):
        raise GeodesicError("geodesic did not end at the root vertex")
    if not down:
        vertices = [target]
    return GeodesicPath(vertices=vertices, darts=darts)
