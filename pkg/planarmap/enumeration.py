"""
Exhaustive Enumeration
All rooted triangulations of the p-gon with n inner vertices, by peeling
"""

from typing import Iterator

from planarmap.builder import MapBuilder
from planarmap.map import PlanarMap
from planarmap.peeling import peel_boundary, peel_degenerate, peel_new_vertex


def _min_triangles(p: int) -> int:
    return 1 if p == 1 else max(p - 2, 0)


def _copy(builder: MapBuilder) -> MapBuilder:
    clone = MapBuilder()
    clone.alpha, clone.phi = list(builder.alpha), list(builder.phi)
    clone.holes = dict(builder.holes)
    return clone


def triangulations(n: int, p: int) -> Iterator[PlanarMap]:
    """
    Yield every rooted triangulation of the p-gon with n inner vertices

    Each map arises from exactly one sequence of peeling decisions on the
    first dart of the first open hole, so the output has no repeats.
    A triangulation of the p-gon with n inner vertices has 2n + p - 2
    triangles, which bounds the search.
    """
    budget = 2 * n + p - 2
    start = MapBuilder()
    chain = start.outer_face(p)
    root = chain[0]

    def explore(builder: MapBuilder, holes: list[list[int]], fresh: int, used: int) -> Iterator[PlanarMap]:
        if not holes:
            if fresh == n and used == budget:
                yield builder.build(root)
            return
        if used + sum(_min_triangles(len(c)) for c in holes) > budget:
            return
        chain, rest = holes[0], holes[1:]
        if len(chain) == 2:
            b = _copy(builder)
            yield from explore(b, peel_degenerate(b, list(chain)) + rest, fresh, used)
        if fresh < n:
            b = _copy(builder)
            yield from explore(b, peel_new_vertex(b, list(chain)) + rest, fresh + 1, used + 1)
        for k in range(len(chain)):
            b = _copy(builder)
            yield from explore(b, peel_boundary(b, list(chain), k) + rest, fresh, used + 1)

    yield from explore(start, [chain], 0, 0)


def count_by_enumeration(n: int, p: int) -> int:
    return sum(1 for _ in triangulations(n, p))
