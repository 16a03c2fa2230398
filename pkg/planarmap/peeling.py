"""
Peeling Steps
Reveal the triangle behind the first dart of a hole chain
"""

from planarmap.builder import MapBuilder
from planarmap.map import MapError

# Chain x_0..x_{p-1} runs a_0 -> a_1 -> ... -> a_0 with the hole on its left.
# The revealed triangle t0 -> t1 -> t2 has t0 = alpha(x_0) : a_1 -> a_0,
# t1 : a_0 -> z and t2 : z -> a_1.


def _reveal(builder: MapBuilder, chain: list[int]) -> tuple[int, int]:
    t0, t1, t2 = builder.new_triangle()
    builder.glue(t0, chain[0])
    return t1, t2


def peel_new_vertex(builder: MapBuilder, chain: list[int]) -> list[list[int]]:
    """The third vertex is a new inner vertex; the hole grows by one"""
    t1, t2 = _reveal(builder, chain)
    return [[t1, t2] + chain[1:]]


def peel_boundary(builder: MapBuilder, chain: list[int], k: int) -> list[list[int]]:
    """
    The third vertex is the boundary vertex a_{k+1}, 0 <= k < p

    Returns:
        The two holes, of perimeters k+1 and p-k
    """
    p = len(chain)
    if not 0 <= k < p:
        raise MapError(f"boundary position {k} out of range for perimeter {p}")
    t1, t2 = _reveal(builder, chain)
    return [[t2] + chain[1 : k + 1], [t1] + chain[k + 1 :]]


def peel_degenerate(builder: MapBuilder, chain: list[int]) -> list[list[int]]:
    """Close a 2-gon by gluing its two sides"""
    if len(chain) != 2:
        raise MapError(f"only a 2-gon can be closed directly, got perimeter {len(chain)}")
    builder.glue(chain[0], chain[1])
    return []
