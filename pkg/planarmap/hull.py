"""
Hulls
Balls of radius r completed by their finite complementary components
"""

from typing import Iterable

from planarmap.builder import OPEN, MapBuilder
from planarmap.distances import DistanceField, distances
from planarmap.map import BOTTOM, TOP, MapError, PlanarMap


def face_components(pmap: PlanarMap, faces: set[int]) -> list[set[int]]:
    """Connected components of a face set under edge adjacency"""
    darts_by_face: dict[int, list[int]] = {}
    for d, f in enumerate(pmap.face_of):
        if f in faces:
            darts_by_face.setdefault(f, []).append(d)
    seen: set[int] = set()
    components = []
    for start in darts_by_face:
        if start in seen:
            continue
        seen.add(start)
        stack, component = [start], {start}
        while stack:
            f = stack.pop()
            for d in darts_by_face[f]:
                g = pmap.face_of[pmap.alpha[d]]
                if g in faces and g not in seen:
                    seen.add(g)
                    component.add(g)
                    stack.append(g)
        components.append(component)
    return components


def fill_enclosed(pmap: PlanarMap, region: set[int], outside_face: int) -> set[int]:
    """Add to region every complementary component that does not contain outside_face"""
    rest = set(range(pmap.num_faces)) - region
    filled = set(region)
    for component in face_components(pmap, rest):
        if outside_face not in component:
            filled |= component
    return filled


def boundary_successor(pmap: PlanarMap, region: set[int], x: int) -> int:
    """
    Next boundary dart after x, the region lying on the right of both

    Turns clockwise around t(x) from alpha(x) through the complement
    until a dart whose right face is back in the region.
    """
    e = pmap.sigma_inv(pmap.alpha[x])
    for _ in range(pmap.num_darts):
        if pmap.face_of[e] in region:
            return e
        e = pmap.sigma_inv(e)
    raise MapError(f"no boundary successor for dart {x}")


def boundary_cycles(pmap: PlanarMap, region: set[int]) -> list[list[int]]:
    """Cycles of darts with the region on their right and its complement on their left"""
    boundary = [d for d in range(pmap.num_darts)
                if pmap.face_of[d] in region and pmap.face_of[pmap.alpha[d]] not in region]
    seen: set[int] = set()
    cycles = []
    for start in boundary:
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        d = boundary_successor(pmap, region, start)
        while d != start:
            cycle.append(d)
            seen.add(d)
            d = boundary_successor(pmap, region, d)
        cycles.append(cycle)
    return cycles


def extract_region(pmap: PlanarMap, region: set[int]) -> tuple[MapBuilder, dict[int, int]]:
    """
    Copy the faces of a region into a builder

    Darts whose opposite lies outside the region are left open; holes and
    marks falling inside the region are carried over.
    """
    kept = [d for d in range(pmap.num_darts) if pmap.face_of[d] in region]
    new = {d: i for i, d in enumerate(kept)}
    builder = MapBuilder()
    builder.alpha = [new.get(pmap.alpha[d], OPEN) for d in kept]
    builder.phi = [new[pmap.phi[d]] for d in kept]
    for role, d in pmap.holes.items():
        if d in new:
            builder.holes[role] = new[d]
    for key, darts in pmap.marked.items():
        if all(d in new for d in darts):
            builder.marked[key] = [new[d] for d in darts]
    return builder, new


def map_height(pmap: PlanarMap, dist: DistanceField) -> int:
    """Distance from the source to the top boundary"""
    if TOP not in pmap.holes:
        return dist.max()
    return min(dist.of_dart(pmap, d) for d in pmap.hole_cycle(TOP))


def ball_region(pmap: PlanarMap, dist: DistanceField, r: int) -> set[int]:
    """Non-hole faces with a vertex at distance at most r-1, plus the bottom face"""
    holes = pmap.hole_faces()
    region = set()
    for d in range(pmap.num_darts):
        f = pmap.face_of[d]
        if f not in holes and dist.of_dart(pmap, d) <= r - 1:
            region.add(f)
    if BOTTOM in pmap.holes:
        region.add(pmap.face_of[pmap.holes[BOTTOM]])
    return region


def hull_region(pmap: PlanarMap, dist: DistanceField, r: int) -> set[int]:
    if TOP not in pmap.holes:
        raise MapError("hull needs a map with a top boundary")
    return fill_enclosed(pmap, ball_region(pmap, dist, r), pmap.face_of[pmap.holes[TOP]])


def hull(pmap: PlanarMap, r: int) -> PlanarMap:
    """
    Hull of radius r around the bottom boundary (or the root vertex)

    The ball of radius r plus all complementary components except the one
    holding the top boundary; the cut is closed by a new top face.
    """
    if r < 1:
        raise MapError(f"hull radius must be positive, got {r}")
    source = BOTTOM if BOTTOM in pmap.holes else "root"
    dist = distances(pmap, source)
    height = map_height(pmap, dist)
    if r > height:
        raise MapError(f"radius {r} exceeds the available height {height}")
    region = hull_region(pmap, dist, r)
    cycles = boundary_cycles(pmap, region)
    if len(cycles) != 1:
        raise MapError(f"hull boundary splits into {len(cycles)} cycles")
    builder, new = extract_region(pmap, region)
    builder.holes.pop(TOP, None)
    builder.close_hole([new[d] for d in cycles[0]], TOP)
    return builder.build(new[pmap.root])


def top_perimeter(pmap: PlanarMap) -> int:
    return pmap.perimeter(TOP)


def vertices_of(pmap: PlanarMap, darts: Iterable[int]) -> list[int]:
    return [pmap.origin(d) for d in darts]
