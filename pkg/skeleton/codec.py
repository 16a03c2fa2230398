"""
Skeleton Codec
Bijection between cylinder triangulations and admissible reverse forests with
polygon fillings, and the strip variant used for single reverse trees
"""

import os
from typing import Literal, Optional

from planarmap.builder import MapBuilder
from planarmap.distances import distances
from planarmap.hull import ball_region, boundary_successor, extract_region, fill_enclosed
from planarmap.map import BOTTOM, OUTER, TOP, MapError, PlanarMap, degenerate_disk
from planarmap.mapfile import read_map, save_map
from skeleton.forest import CodecError, ReverseForest, dumps_forest, loads_forest

CYLINDER = "cylinder"
STRIP = "strip"
GAMMA_LEFT = "gamma_left"
GAMMA_RIGHT = "gamma_right"

Mode = Literal["cylinder", "strip"]


class SkeletonDecomposition:
    """A reverse forest and one triangulated polygon per vertex that needs it"""

    def __init__(self, forest: ReverseForest, fillings: dict[int, PlanarMap], mode: Mode = CYLINDER):
        self.forest = forest
        self.fillings = fillings
        self.mode = mode

    def filled_vertices(self) -> list[int]:
        """Every vertex in a strip, the vertices above reverse height 0 in a cylinder"""
        if self.mode == STRIP:
            return list(range(len(self.forest)))
        return self.forest.inner_vertices()

    def check(self) -> None:
        for v in self.filled_vertices():
            if v not in self.fillings:
                raise CodecError(f"vertex {v} has no filling")
            expected = self.forest.num_children(v) + 2
            got = len(self.fillings[v].face_cycle(self.fillings[v].root))
            if got != expected:
                raise CodecError(f"perimeter mismatch at vertex {v}: filling has {got}, expected {expected}")

    def same_as(self, other: "SkeletonDecomposition") -> bool:
        if self.mode != other.mode or self.forest != other.forest:
            return False
        return all(self.fillings[v].same_as(other.fillings[v]) for v in self.filled_vertices())


# ============================================================================
# Decoding
# ============================================================================


def _fill(builder: MapBuilder, chain: list[int], filling: PlanarMap, v: int) -> None:
    try:
        builder.fill(chain, filling)
    except MapError as e:
        raise CodecError(f"vertex {v}: {e}") from e


def decode(sk: SkeletonDecomposition) -> PlanarMap:
    """
    Rebuild the triangulation encoded by a skeleton

    Cylinder mode: the bottom face carries the vertices at reverse height 0
    in forest order; level by level, each vertex at reverse height j gets a
    downward triangle whose apex sits on the cycle below, and the polygon
    between two consecutive triangles is filled with the vertex's map.
    """
    sk.check()
    if sk.mode == STRIP:
        return _decode_strip(sk)
    forest = sk.forest
    if not forest.is_preadmissible():
        raise CodecError(f"forest is not pre-admissible: {forest!r}")
    builder = MapBuilder()
    level0 = forest.level(0)
    below = builder.new_face(len(level0))
    builder.holes[BOTTOM] = below[0]
    root = below[level0.index(forest.distinguished)]

    for j in range(1, forest.height + 1):
        above = _decode_level(builder, forest, sk.fillings, j, below, cyclic=True)
        below = above
    builder.close_hole(below, TOP)
    return builder.build(root)


def _decode_level(builder: MapBuilder, forest: ReverseForest, fillings: dict[int, PlanarMap],
                  j: int, below: list[int], cyclic: bool, left: Optional[int] = None) -> list[int]:
    """Add the downward triangles of the vertices at reverse height j and fill the holes between them"""
    vertices = forest.level(j)
    triangles = [builder.new_triangle() for _ in vertices]
    offset = 0
    for k, v in enumerate(vertices):
        c = forest.num_children(v)
        side = triangles[k - 1][1] if (k > 0 or cyclic) else left
        chain = [side] + below[offset : offset + c] + [triangles[k][2]]
        offset += c
        _fill(builder, chain, fillings[v], v)
    if offset != len(below):
        raise CodecError(f"level {j}: children account for {offset} of {len(below)} edges below")
    return [t[0] for t in triangles]


def _decode_strip(sk: SkeletonDecomposition) -> PlanarMap:
    """
    Strip mode: the forest has height r - 1 and every vertex is filled

    Reverse height i corresponds to the layer between distances i and i+1
    from the tip. The left boundary edges are fresh darts of the outer
    face; the right boundary is formed by the last triangle of each layer.
    """
    forest = sk.forest
    builder = MapBuilder()
    layers = forest.height + 1
    lefts: list[int] = []
    rights: list[int] = []
    below: list[int] = []
    for i in range(layers):
        left = builder.new_dart()
        lefts.append(left)
        below = _decode_level(builder, forest, sk.fillings, i, below, cyclic=False, left=left)
        last = below[-1]
        rights.append(builder.phi[last])
    top = below

    # outer face: down the left side, up the right side, then right to left along the top
    right_darts = [builder.new_dart() for _ in rights]
    top_darts = [builder.new_dart() for _ in top]
    for d, partner in zip(right_darts, rights):
        builder.glue(d, partner)
    for d, partner in zip(top_darts, top):
        builder.glue(d, partner)
    cycle = lefts[::-1] + right_darts + top_darts[::-1]
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        builder.phi[a] = b
    builder.holes[OUTER] = right_darts[0]
    builder.marked[GAMMA_LEFT] = lefts
    builder.marked[GAMMA_RIGHT] = right_darts
    return builder.build(right_darts[0])


# ============================================================================
# Encoding
# ============================================================================


def top_chain(pmap: PlanarMap) -> list[int]:
    """Darts below the top face, left to right: the opposites of the top face read backwards"""
    faces = pmap.hole_cycle(TOP)
    return [pmap.alpha[faces[0]]] + [pmap.alpha[f] for f in reversed(faces[1:])]


def darts_by_face(pmap: PlanarMap) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for d, f in enumerate(pmap.face_of):
        out.setdefault(f, []).append(d)
    return out


def extract_filling(pmap: PlanarMap, chain: list[int],
                    by_face: Optional[dict[int, list[int]]] = None) -> PlanarMap:
    """Cut out the polygon on the left of a hole chain as a disk rooted at the chain's first dart"""
    if len(chain) == 2 and pmap.alpha[chain[0]] == chain[1]:
        return degenerate_disk()
    by_face = by_face if by_face is not None else darts_by_face(pmap)
    fence = {pmap.alpha[d] for d in chain}
    start = pmap.face_of[pmap.alpha[chain[0]]]
    region, stack = {start}, [start]
    while stack:
        f = stack.pop()
        for d in by_face[f]:
            if d in fence:
                continue
            g = pmap.face_of[pmap.alpha[d]]
            if g not in region:
                region.add(g)
                stack.append(g)
    builder, new = extract_region(pmap, region)
    builder.holes.clear()
    builder.marked.clear()
    outer = builder.new_face(len(chain))
    for o, x in zip(outer, chain):
        inner = new.get(pmap.alpha[x])
        if inner is None:
            raise CodecError(f"hole of chain starting at dart {chain[0]} is not enclosed")
        builder.glue(o, inner)
    builder.holes[OUTER] = outer[0]
    try:
        return builder.build(outer[0]).canonical()
    except MapError as e:
        raise CodecError(f"filling at dart {chain[0]} is not a closed polygon: {e}") from e


def encode(pmap: PlanarMap) -> SkeletonDecomposition:
    """
    Skeleton of a cylinder triangulation

    Walking down from the top, the downward triangle of each edge at
    distance j is the face below it; the parent of an edge at distance
    j-1 is the first downward triangle met clockwise from it. The polygon
    between consecutive downward triangles becomes the filling of the
    corresponding forest vertex. The forest is rotated so that the tree
    above the root edge comes first.
    """
    if BOTTOM not in pmap.holes or TOP not in pmap.holes:
        raise CodecError("a cylinder needs bottom and top boundaries")
    try:
        dist = distances(pmap, BOTTOM)
    except MapError as e:
        raise CodecError(str(e)) from e
    top = top_chain(pmap)
    heights = {dist.of_dart(pmap, d) for d in top}
    if len(heights) != 1 or min(heights) < 1:
        raise CodecError(f"top boundary is not at a constant positive distance: {sorted(heights)}")
    r = heights.pop()
    bottom_cycle = pmap.hole_cycle(BOTTOM)
    if pmap.root not in bottom_cycle:
        raise CodecError("the root edge must lie on the bottom boundary")
    top_face = pmap.face_of[pmap.holes[TOP]]
    by_face = darts_by_face(pmap)
    bottom_face = pmap.face_of[pmap.holes[BOTTOM]]

    children: dict[int, list[int]] = {}
    fillings: dict[int, PlanarMap] = {}
    chain = top
    for j in range(r, 0, -1):
        down = set()
        for tau in chain:
            face = pmap.face_cycle(tau)
            if len(face) != 3 or pmap.face_of[tau] in (top_face, bottom_face):
                raise CodecError(f"edge {tau} at distance {j} has no downward triangle")
            if dist.of_dart(pmap, face[2]) != j - 1:
                raise CodecError(f"triangle below edge {tau} has no apex at distance {j - 1}")
            down.add(pmap.face_of[tau])
        if j == 1:
            below_region = {bottom_face}
        else:
            below_region = fill_enclosed(pmap, ball_region(pmap, dist, j - 1), top_face)
        region = below_region | down
        next_chain: list[int] = []
        for k, tau in enumerate(chain):
            side = pmap.phi[chain[k - 1]]
            closing = pmap.phi[pmap.phi[tau]]
            hole = [side]
            if pmap.alpha[side] != closing:
                e = boundary_successor(pmap, region, side)
                while e != closing:
                    if pmap.face_of[e] in down or len(hole) > pmap.num_darts:
                        raise CodecError(f"hole after dart {side} does not close on its triangle")
                    hole.append(e)
                    e = boundary_successor(pmap, region, e)
            hole.append(closing)
            children[tau] = hole[1:-1]
            fillings[tau] = extract_filling(pmap, hole, by_face)
            next_chain.extend(children[tau])
        chain = next_chain

    if sorted(chain) != sorted(bottom_cycle):
        raise CodecError("the lowest layer does not match the bottom boundary")
    for d in chain:
        children[d] = []

    # locate the tree above the root edge
    parent_of = {c: tau for tau, cs in children.items() for c in cs}
    d = pmap.root
    while d in parent_of:
        d = parent_of[d]
    first = top.index(d)
    roots = top[first:] + top[:first]

    ids: dict[int, int] = {}
    child_lists: list[list[int]] = []
    root_ids = []
    for tau in roots:
        stack = [(tau, None)]
        while stack:
            dart, parent = stack.pop()
            v = len(child_lists)
            ids[dart] = v
            child_lists.append([])
            if parent is None:
                root_ids.append(v)
            else:
                child_lists[parent].append(v)
            for c in reversed(children[dart]):
                stack.append((c, v))
    forest = ReverseForest(child_lists, root_ids, r, ids[pmap.root])
    vertex_fillings = {ids[tau]: m for tau, m in fillings.items()}
    return SkeletonDecomposition(forest, vertex_fillings, CYLINDER)


# ============================================================================
# Files
# ============================================================================


def filling_path(fills_dir: str, v: int) -> str:
    return os.path.join(fills_dir, f"v{v}.map")


def dumps_skeleton(sk: SkeletonDecomposition) -> str:
    """The forest text followed by a mode line; fillings live in separate map files"""
    return dumps_forest(sk.forest) + f"mode {sk.mode}\n"


def save_skeleton(sk: SkeletonDecomposition, forest_path: str, fills_dir: str) -> str:
    """Write the forest to forest_path and filling v to <fills_dir>/v<v>.map"""
    os.makedirs(fills_dir, exist_ok=True)
    for v in sk.filled_vertices():
        save_map(sk.fillings[v], filling_path(fills_dir, v))
    with open(forest_path, "w") as f:
        f.write(dumps_skeleton(sk))
    return forest_path


def loads_skeleton(text: str, fills_dir: str) -> SkeletonDecomposition:
    forest = loads_forest(text)
    mode = CYLINDER
    for line in text.splitlines():
        parts = line.split()
        if parts and parts[0] == "mode":
            mode = parts[1]
    if mode not in (CYLINDER, STRIP):
        raise CodecError(f"unknown skeleton mode '{mode}'")
    sk = SkeletonDecomposition(forest, {}, mode)
    for v in sk.filled_vertices():
        path = filling_path(fills_dir, v)
        if not os.path.exists(path):
            raise CodecError(f"vertex {v} has no filling file {path}")
        sk.fillings[v] = read_map(path)
    sk.check()
    return sk


def load_skeleton(forest_path: str, fills_dir: str) -> SkeletonDecomposition:
    with open(forest_path) as f:
        return loads_skeleton(f.read(), fills_dir)
