"""
Planar Map
Rooted combinatorial maps in dart representation with marked holes
"""

from functools import cached_property
from typing import Iterable, Optional

OUTER = "outer"
BOTTOM = "bottom"
TOP = "top"


class MapError(ValueError):
    """Raised on malformed maps or violated operation preconditions"""


class PlanarMap:
    """
    A rooted planar map stored as two permutations on darts 0..n-1

    alpha pairs each dart with its opposite dart. phi follows the face on
    the right of a dart, so faces are the orbits of phi and are traversed
    clockwise. The rotation around the origin of a dart (counterclockwise)
    is sigma = phi o alpha. Holes are named non-triangular faces, each
    referenced by one of its darts.
    """

    def __init__(self, alpha: list[int], phi: list[int], root: int,
                 holes: Optional[dict[str, int]] = None,
                 marked: Optional[dict[str, list[int]]] = None):
        if len(alpha) != len(phi):
            raise MapError("alpha and phi must have the same length")
        self.alpha = list(alpha)
        self.phi = list(phi)
        self.root = root
        self.holes = dict(holes or {})
        self.marked = {k: list(v) for k, v in (marked or {}).items()}

    # ------------------------------------------------------------------
    # Permutations
    # ------------------------------------------------------------------

    @property
    def num_darts(self) -> int:
        return len(self.alpha)

    def sigma(self, d: int) -> int:
        """Next dart counterclockwise around the origin of d"""
        return self.phi[self.alpha[d]]

    @cached_property
    def phi_inv(self) -> list[int]:
        inv = [0] * self.num_darts
        for d, e in enumerate(self.phi):
            inv[e] = d
        return inv

    def sigma_inv(self, d: int) -> int:
        return self.alpha[self.phi_inv[d]]

    # ------------------------------------------------------------------
    # Cells
    # ------------------------------------------------------------------

    @cached_property
    def face_of(self) -> list[int]:
        """Face id of every dart; ids follow the smallest dart of each face"""
        face = [-1] * self.num_darts
        count = 0
        for start in range(self.num_darts):
            if face[start] >= 0:
                continue
            d = start
            while face[d] < 0:
                face[d] = count
                d = self.phi[d]
            count += 1
        return face

    @cached_property
    def vertex_of(self) -> list[int]:
        """Vertex id (origin) of every dart; ids follow the smallest dart of each vertex"""
        vertex = [-1] * self.num_darts
        count = 0
        for start in range(self.num_darts):
            if vertex[start] >= 0:
                continue
            d = start
            while vertex[d] < 0:
                vertex[d] = count
                d = self.sigma(d)
            count += 1
        return vertex

    def origin(self, d: int) -> int:
        return self.vertex_of[d]

    def target(self, d: int) -> int:
        return self.vertex_of[self.alpha[d]]

    @property
    def num_vertices(self) -> int:
        return max(self.vertex_of, default=-1) + 1

    @property
    def num_faces(self) -> int:
        return max(self.face_of, default=-1) + 1

    @property
    def num_edges(self) -> int:
        return self.num_darts // 2

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    def face_cycle(self, d: int) -> list[int]:
        """Darts of the face of d, in phi order starting at d"""
        cycle = [d]
        e = self.phi[d]
        while e != d:
            cycle.append(e)
            e = self.phi[e]
        return cycle

    def rotation(self, d: int) -> list[int]:
        """Darts with the same origin as d, counterclockwise starting at d"""
        cycle = [d]
        e = self.sigma(d)
        while e != d:
            cycle.append(e)
            e = self.sigma(e)
        return cycle

    def hole_cycle(self, role: str) -> list[int]:
        if role not in self.holes:
            raise MapError(f"map has no hole '{role}'")
        return self.face_cycle(self.holes[role])

    def hole_faces(self) -> dict[int, str]:
        return {self.face_of[d]: role for role, d in self.holes.items()}

    def perimeter(self, role: str) -> int:
        return len(self.hole_cycle(role))

    @cached_property
    def vertex_darts(self) -> list[int]:
        """One outgoing dart per vertex (the smallest)"""
        first = [-1] * self.num_vertices
        for d, v in enumerate(self.vertex_of):
            if first[v] < 0:
                first[v] = d
        return first

    def neighbors(self, v: int) -> Iterable[int]:
        for d in self.rotation(self.vertex_darts[v]):
            yield self.target(d)

    # ------------------------------------------------------------------
    # Canonical form
    # ------------------------------------------------------------------

    def canonical_order(self) -> list[int]:
        """Darts reachable from the root, in breadth-first order over phi then alpha"""
        seen = {self.root: 0}
        order = [self.root]
        i = 0
        while i < len(order):
            d = order[i]
            i += 1
            for e in (self.phi[d], self.alpha[d]):
                if e not in seen:
                    seen[e] = len(order)
                    order.append(e)
        return order

    def canonical(self) -> "PlanarMap":
        """Relabel darts by canonical_order; hole references become the smallest dart of their face"""
        order = self.canonical_order()
        new = {d: i for i, d in enumerate(order)}
        alpha = [new[self.alpha[d]] for d in order]
        phi = [new[self.phi[d]] for d in order]
        holes = {}
        for role, d in self.holes.items():
            holes[role] = min(new[e] for e in self.face_cycle(d))
        marked = {k: [new[d] for d in v] for k, v in self.marked.items()}
        return PlanarMap(alpha, phi, 0, holes, marked)

    def canonical_key(self) -> tuple:
        c = self.canonical()
        return (
            tuple(c.alpha),
            tuple(c.phi),
            tuple(sorted(c.holes.items())),
            tuple(sorted((k, tuple(v)) for k, v in c.marked.items())),
        )

    def same_as(self, other: "PlanarMap") -> bool:
        """Equality as rooted maps with holes and marks"""
        return self.canonical_key() == other.canonical_key()

    def with_root(self, root: int) -> "PlanarMap":
        return PlanarMap(self.alpha, self.phi, root, self.holes, self.marked)

    def __repr__(self) -> str:
        holes = ", ".join(f"{k}:{self.perimeter(k)}" for k in self.holes)
        return (f"PlanarMap(V={self.num_vertices}, E={self.num_edges}, F={self.num_faces}, "
                f"root={self.root}, holes=[{holes}])")


def degenerate_disk() -> PlanarMap:
    """The 2-gon consisting of a single edge"""
    return PlanarMap(alpha=[1, 0], phi=[1, 0], root=0, holes={OUTER: 0})
