"""
Slicing
Cut a hull along its geodesic tree into strips, and glue strips back together
"""

from typing import NamedTuple

from geodesics.leftmost import GeodesicError
from planarmap.builder import OPEN, complete_hole_faces
from planarmap.distances import distances
from planarmap.map import OUTER, TOP, MapError, PlanarMap
from skeleton.codec import GAMMA_LEFT, GAMMA_RIGHT, top_chain
from skeleton.utree import GeodesicTree

SLICE_TOP = "slice_top"


class Slice(NamedTuple):
    """
    One strip of a sliced hull

    provenance[d] is the source dart of slice dart d; for darts of the
    outer face it is the source dart on the other side of the cut.
    """

    map: PlanarMap
    provenance: list[int]
    source_root: int
    source_holes: dict[str, int]
    source_marked: dict[str, list[int]]

    @property
    def top_edges(self) -> int:
        return len(self.map.marked.get(SLICE_TOP, []))

    @property
    def height(self) -> int:
        return len(self.map.marked.get(GAMMA_LEFT, []))


def _cut_edges(pmap: PlanarMap, tree: GeodesicTree) -> set[int]:
    if tree.vertices is None or tree.edges is None:
        raise GeodesicError("tree carries no map vertices; extract it with geodesic_tree")
    cut: set[int] = set()
    for node, down in enumerate(tree.edges):
        if down is None:
            continue
        if not 0 <= down < pmap.num_darts or pmap.origin(down) != tree.vertices[node]:
            raise GeodesicError(f"tree node {node} does not match the map")
        cut.add(down)
        cut.add(pmap.alpha[down])
    return cut


def _components(alpha: list[int], phi: list[int]) -> list[list[int]]:
    seen = [False] * len(alpha)
    out = []
    for start in range(len(alpha)):
        if seen[start]:
            continue
        seen[start] = True
        stack, comp = [start], []
        while stack:
            d = stack.pop()
            comp.append(d)
            for e in (alpha[d], phi[d]):
                if not seen[e]:
                    seen[e] = True
                    stack.append(e)
        out.append(sorted(comp))
    return out


def slice_map(pmap: PlanarMap, tree: GeodesicTree) -> list[Slice]:
    """
    Cut a hull in plane form along the edges of its geodesic tree

    Every slice is a disk whose outer face runs down the left ray, up the
    right ray and back along its part of the top boundary. Slices come out
    left to right in the order of the top boundary.

    Raises:
        GeodesicError: if the tree does not belong to the map or a piece is not a disk
    """
    if set(pmap.holes) != {TOP}:
        raise GeodesicError(f"slicing needs a hull in plane form, got holes {sorted(pmap.holes)}")
    cut = _cut_edges(pmap, tree)
    top_face = pmap.face_of[pmap.holes[TOP]]
    dist = distances(pmap, "root")

    kept = [d for d in range(pmap.num_darts) if pmap.face_of[d] != top_face]
    new = {d: i for i, d in enumerate(kept)}
    alpha = [OPEN] * len(kept)
    phi = [new[pmap.phi[d]] for d in kept]
    provenance = list(kept)
    for d in kept:
        a = pmap.alpha[d]
        if d in cut or a not in new:
            x = len(alpha)
            alpha.append(new[d])
            phi.append(OPEN)
            provenance.append(a)
            alpha[new[d]] = x
        else:
            alpha[new[d]] = new[a]
    try:
        complete_hole_faces(alpha, phi)
    except MapError as e:
        raise GeodesicError(f"cannot close the slices: {e}") from e

    position = {d: k for k, d in enumerate(top_chain(pmap))}
    pieces = []
    for comp in _components(alpha, phi):
        local = {d: i for i, d in enumerate(comp)}
        outer = [d for d in comp if d >= len(kept)]
        if not outer:
            raise GeodesicError("a piece of the hull is not bounded by the cut")
        lefts, rights, tops = [], [], []
        for x in outer:
            inner = provenance[alpha[x]]
            if inner in position:
                tops.append(x)
            elif dist[pmap.target(inner)] > dist[pmap.origin(inner)]:
                lefts.append((dist[pmap.origin(inner)], x))
            else:
                rights.append((dist[pmap.target(inner)], x))
        sub = PlanarMap([local[alpha[d]] for d in comp], [local[phi[d]] for d in comp], 0)
        if len({sub.face_of[local[x]] for x in outer}) != 1:
            raise GeodesicError("a slice has more than one boundary")
        if not tops:
            raise GeodesicError("a slice does not reach the top boundary")
        tops.sort(key=lambda x: position[provenance[alpha[x]]])
        root = local[min(rights)[1]] if rights else local[outer[0]]
        marked = {
            GAMMA_LEFT: [local[x] for _, x in sorted(lefts)],
            GAMMA_RIGHT: [local[x] for _, x in sorted(rights)],
            SLICE_TOP: [local[x] for x in tops],
        }
        sub = PlanarMap(sub.alpha, sub.phi, root, {OUTER: local[outer[0]]}, marked)
        first_top = position[provenance[alpha[tops[0]]]]
        pieces.append((first_top, Slice(sub, [provenance[d] for d in comp], pmap.root,
                                        dict(pmap.holes), {k: list(v) for k, v in pmap.marked.items()})))
    pieces.sort(key=lambda item: item[0])
    return [s for _, s in pieces]


def glue_slices(slices: list[Slice]) -> PlanarMap:
    """Inverse of slice_map: identify the cut darts through their provenance"""
    if not slices:
        raise GeodesicError("nothing to glue")
    n = 1 + max(max(s.provenance) for s in slices)
    alpha = [OPEN] * n
    phi = [OPEN] * n
    for s in slices:
        boundary = s.map.face_of[s.map.holes[OUTER]]
        for d, source in enumerate(s.provenance):
            if s.map.face_of[d] == boundary:
                continue
            if phi[source] != OPEN:
                raise GeodesicError(f"source dart {source} appears in two slices")
            phi[source] = s.provenance[s.map.phi[d]]
            alpha[source] = s.provenance[s.map.alpha[d]]
    for d in range(n):
        a = alpha[d]
        if a != OPEN and alpha[a] == OPEN:
            alpha[a] = d
    if OPEN in alpha:
        raise GeodesicError("slices do not cover the source map")
    try:
        complete_hole_faces(alpha, phi)
    except MapError as e:
        raise GeodesicError(f"cannot restore the top face: {e}") from e
    first = slices[0]
    return PlanarMap(alpha, phi, first.source_root, first.source_holes, first.source_marked)
