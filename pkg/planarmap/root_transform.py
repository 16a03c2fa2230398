"""
Root Transformation
Passage between triangulations of the 1-gon and rooted plane triangulations
"""

from planarmap.builder import OPEN
from planarmap.map import BOTTOM, MapError, PlanarMap


def _compact(alpha: list[int], phi: list[int], removed: set[int]) -> tuple[list[int], list[int], dict[int, int]]:
    kept = [d for d in range(len(alpha)) if d not in removed]
    new = {d: i for i, d in enumerate(kept)}
    return [new[alpha[d]] for d in kept], [new[phi[d]] for d in kept], new


def root_transform(pmap: PlanarMap) -> PlanarMap:
    """
    Turn a triangulation of the 1-gon into its rooted plane form

    The boundary loop and the triangle inside it are removed and the two
    remaining sides of that triangle are glued into the new root edge.
    Vertices are unchanged; two edges and two faces disappear.
    """
    if BOTTOM not in pmap.holes:
        raise MapError("root transform needs a bottom boundary")
    beta = pmap.holes[BOTTOM]
    if pmap.phi[beta] != beta:
        raise MapError(f"bottom boundary has perimeter {len(pmap.face_cycle(beta))}, expected a loop")
    loop = pmap.alpha[beta]
    l1 = pmap.phi[loop]
    l2 = pmap.phi[l1]
    if pmap.phi[l2] != loop:
        raise MapError("the face inside the boundary loop is not a triangle")
    x, y = pmap.alpha[l1], pmap.alpha[l2]
    if x == l2:
        raise MapError("the triangle inside the boundary loop is folded onto itself")
    alpha = list(pmap.alpha)
    alpha[x], alpha[y] = y, x
    removed = {beta, loop, l1, l2}
    alpha, phi, new = _compact(alpha, pmap.phi, removed)
    holes = {role: new[d] for role, d in pmap.holes.items() if role != BOTTOM and d in new}
    marked = {k: [new[d] for d in v] for k, v in pmap.marked.items() if all(d in new for d in v)}
    return PlanarMap(alpha, phi, new[y], holes, marked)


def inverse_root_transform(pmap: PlanarMap) -> PlanarMap:
    """Split the root edge into a 2-gon holding a loop around a new bottom face"""
    if BOTTOM in pmap.holes:
        raise MapError("map already has a bottom boundary")
    y = pmap.root
    x = pmap.alpha[y]
    alpha, phi = list(pmap.alpha), list(pmap.phi)
    n = len(alpha)
    beta, loop, l1, l2 = n, n + 1, n + 2, n + 3
    alpha.extend([OPEN] * 4)
    phi.extend([beta, l1, l2, loop])
    alpha[beta], alpha[loop] = loop, beta
    alpha[l1], alpha[x] = x, l1
    alpha[l2], alpha[y] = y, l2
    holes = dict(pmap.holes)
    holes[BOTTOM] = beta
    return PlanarMap(alpha, phi, beta, holes, pmap.marked)
