"""
Distances
Breadth-first graph distances from the root vertex or the bottom boundary
"""

from collections import deque
from typing import Iterable, Union

from planarmap.map import BOTTOM, MapError, PlanarMap

INFINITY_MARK = "infinity"

Source = Union[str, Iterable[int]]


class DistanceField:
    """Per-vertex distance to a source set of vertices"""

    def __init__(self, values: list[int], sources: list[int]):
        self.values = values
        self.sources = sources

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    def __len__(self) -> int:
        return len(self.values)

    def max(self) -> int:
        return max(self.values)

    def of_dart(self, pmap: PlanarMap, d: int) -> int:
        return self.values[pmap.origin(d)]

    def is_lipschitz(self, pmap: PlanarMap) -> bool:
        return all(abs(self.values[pmap.origin(d)] - self.values[pmap.target(d)]) <= 1
                   for d in range(pmap.num_darts))


def skipped_darts(pmap: PlanarMap) -> set[int]:
    """Darts of artificial edges that do not count as graph edges"""
    skip = set()
    for d in pmap.marked.get(INFINITY_MARK, []):
        skip.add(d)
        skip.add(pmap.alpha[d])
    return skip


def adjacency(pmap: PlanarMap) -> list[list[int]]:
    skip = skipped_darts(pmap)
    adj: list[list[int]] = [[] for _ in range(pmap.num_vertices)]
    for d in range(pmap.num_darts):
        if d not in skip:
            adj[pmap.origin(d)].append(pmap.target(d))
    return adj


def source_vertices(pmap: PlanarMap, source: Source) -> list[int]:
    if source == "root":
        return [pmap.origin(pmap.root)]
    if source == "bottom_boundary" or source == BOTTOM:
        return sorted({pmap.origin(d) for d in pmap.hole_cycle(BOTTOM)})
    return sorted(set(source))


def distances(pmap: PlanarMap, source: Source = "root") -> DistanceField:
    """
    BFS distances from the root vertex, the bottom boundary or a vertex set

    Raises:
        MapError: if some vertex cannot be reached
    """
    sources = source_vertices(pmap, source)
    adj = adjacency(pmap)
    dist = [-1] * pmap.num_vertices
    queue = deque()
    for v in sources:
        dist[v] = 0
        queue.append(v)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    unreachable = [v for v, x in enumerate(dist) if x < 0]
    if unreachable:
        raise MapError(f"disconnected map: {len(unreachable)} vertices unreachable, e.g. {unreachable[:5]}")
    return DistanceField(dist, sources)
