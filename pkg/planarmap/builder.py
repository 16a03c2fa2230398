"""
Map Builder
Incremental construction of planar maps from faces, gluings and hole fillings
"""

from typing import Optional

from planarmap.map import OUTER, MapError, PlanarMap

OPEN = -1


class MapBuilder:
    """
    Mutable dart arrays with open (unglued) darts

    A hole chain is a cyclic list of open darts x_0..x_{k-1} with the
    unfilled region on their left and t(x_j) = o(x_{j+1}).
    """

    def __init__(self):
        self.alpha: list[int] = []
        self.phi: list[int] = []
        self.holes: dict[str, int] = {}
        self.marked: dict[str, list[int]] = {}

    @classmethod
    def from_map(cls, pmap: PlanarMap) -> "MapBuilder":
        builder = cls()
        builder.alpha = list(pmap.alpha)
        builder.phi = list(pmap.phi)
        builder.holes = dict(pmap.holes)
        builder.marked = {k: list(v) for k, v in pmap.marked.items()}
        return builder

    @property
    def num_darts(self) -> int:
        return len(self.alpha)

    def new_dart(self) -> int:
        self.alpha.append(OPEN)
        self.phi.append(OPEN)
        return len(self.alpha) - 1

    def new_face(self, k: int) -> list[int]:
        """k fresh darts forming one face, phi-cycled in list order"""
        start = len(self.alpha)
        darts = list(range(start, start + k))
        self.alpha.extend([OPEN] * k)
        self.phi.extend(darts[1:] + darts[:1])
        return darts

    def new_triangle(self) -> list[int]:
        return self.new_face(3)

    def glue(self, a: int, b: int) -> None:
        if self.alpha[a] != OPEN or self.alpha[b] != OPEN:
            raise MapError(f"cannot glue darts {a} and {b}: already glued")
        self.alpha[a] = b
        self.alpha[b] = a

    def is_open(self, d: int) -> bool:
        return self.alpha[d] == OPEN

    def open_darts(self) -> list[int]:
        return [d for d, e in enumerate(self.alpha) if e == OPEN]

    def sigma(self, d: int) -> int:
        return self.phi[self.alpha[d]]

    def outer_face(self, p: int) -> list[int]:
        """Start a standalone disk: a p-gon outer face whose darts form the chain to fill"""
        chain = self.new_face(p)
        self.holes[OUTER] = chain[0]
        return chain

    def fill(self, chain: list[int], disk: PlanarMap) -> dict[int, int]:
        """
        Glue a triangulated polygon into a hole chain

        The disk's outer face, read in phi order from its root, is
        identified with the chain: outer dart o_i takes the place of x_i.

        Returns:
            Map from disk darts to builder darts
        """
        outer = disk.face_cycle(disk.root)
        if len(outer) != len(chain):
            raise MapError(f"perimeter mismatch: filling has {len(outer)}, hole has {len(chain)}")
        mapping: dict[int, int] = dict(zip(outer, chain))
        outer_set = set(outer)
        inner = [d for d in range(disk.num_darts) if d not in outer_set]
        base = len(self.alpha)
        for offset, d in enumerate(inner):
            mapping[d] = base + offset
        self.alpha.extend([OPEN] * len(inner))
        self.phi.extend([OPEN] * len(inner))
        for d in inner:
            self.phi[mapping[d]] = mapping[disk.phi[d]]
        for d in inner:
            self.alpha[mapping[d]] = mapping[disk.alpha[d]]
        for o, x in zip(outer, chain):
            partner = mapping[disk.alpha[o]]
            self.alpha[x] = partner
            self.alpha[partner] = x
        return mapping

    def close_hole(self, chain: list[int], role: Optional[str] = None) -> list[int]:
        """Close a hole chain with a new face h_i, alpha(h_i) = x_i, phi(h_i) = h_{i-1}"""
        k = len(chain)
        start = len(self.alpha)
        faces = list(range(start, start + k))
        self.alpha.extend(chain)
        self.phi.extend(faces[-1:] + faces[:-1])
        for x, hd in zip(chain, faces):
            if self.alpha[x] != OPEN:
                raise MapError(f"dart {x} of the hole chain is not open")
            self.alpha[x] = hd
        if role is not None:
            self.holes[role] = faces[0]
        return faces

    def build(self, root: int) -> PlanarMap:
        open_darts = [d for d in range(len(self.alpha)) if self.alpha[d] == OPEN or self.phi[d] == OPEN]
        if open_darts:
            raise MapError(f"{len(open_darts)} darts are still open, e.g. {open_darts[:5]}")
        return PlanarMap(self.alpha, self.phi, root, self.holes, self.marked)


def complete_hole_faces(alpha: list[int], phi: list[int]) -> None:
    """
    Set phi on darts that have alpha but no face yet

    Such darts border a region that was cut away. Turning clockwise around
    the target vertex from alpha(d), the first dart without a known face
    predecessor is phi(d). Each vertex may carry at most one such corner.
    """
    phi_inv: dict[int, int] = {e: d for d, e in enumerate(phi) if e != OPEN}
    pending = [d for d in range(len(alpha)) if phi[d] == OPEN]
    for d in pending:
        e = alpha[d]
        for _ in range(len(alpha) + 1):
            prev = phi_inv.get(e)
            if prev is None:
                phi[d] = e
                break
            e = alpha[prev]
        else:
            raise MapError(f"cannot complete hole face at dart {d}")
