"""
Geodesic Trees
Plane trees with heights: the genealogy of the infinite trees of a skeleton
"""

from typing import Optional, Sequence, Union

from skeleton.forest import CodecError, ReverseForest


class GeodesicTree:
    """
    Rooted plane tree whose vertices carry a height

    The root sits at height 0 and every child is one higher than its
    parent, so vertices of degree one along a branch are kept explicitly.
    Trees extracted from a map also record, per node, the map vertex and
    the dart leading down to the parent.
    """

    def __init__(self, children: list[list[int]], heights: list[int], root: int = 0,
                 vertices: Optional[list[int]] = None, edges: Optional[list[Optional[int]]] = None):
        self.children = children
        self.heights = heights
        self.root = root
        self.vertices = vertices
        self.edges = edges

    @classmethod
    def path(cls, r: int) -> "GeodesicTree":
        return cls([[i + 1] for i in range(r)] + [[]], list(range(r + 1)))

    def __len__(self) -> int:
        return len(self.children)

    @property
    def height(self) -> int:
        return max(self.heights, default=0)

    def leaves(self) -> list[int]:
        """Leaves from left to right"""
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            if not self.children[v]:
                out.append(v)
            stack.extend(reversed(self.children[v]))
        return out

    def nodes_at(self, h: int) -> list[int]:
        """Vertices at height h from left to right"""
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            if self.heights[v] == h:
                out.append(v)
            elif self.heights[v] < h:
                stack.extend(reversed(self.children[v]))
        return out

    def offspring_counts(self, lo: int, hi: int) -> list[int]:
        """Child counts of the vertices whose height lies in [lo, hi)"""
        return [len(self.children[v]) for v in range(len(self)) if lo <= self.heights[v] < hi]

    def is_path(self) -> bool:
        return all(len(c) <= 1 for c in self.children)

    def to_string(self) -> str:
        def walk(v: int) -> str:
            return f"({self.heights[v]}" + "".join(walk(c) for c in self.children[v]) + ")"

        return walk(self.root)

    def isomorphic(self, other: "GeodesicTree") -> bool:
        """Equality as plane trees with heights"""
        return self.to_string() == other.to_string()

    def __repr__(self) -> str:
        return f"GeodesicTree(nodes={len(self)}, height={self.height}, leaves={len(self.leaves())})"


def parse_geodesic_tree(text: str) -> GeodesicTree:
    children: list[list[int]] = []
    heights: list[int] = []
    stack: list[int] = []
    i = 0
    text = "".join(text.split())
    while i < len(text):
        ch = text[i]
        if ch == "(":
            j = i + 1
            while j < len(text) and (text[j].isdigit() or text[j] == "-"):
                j += 1
            if j == i + 1:
                raise CodecError(f"missing height at offset {i}")
            v = len(children)
            children.append([])
            heights.append(int(text[i + 1 : j]))
            if stack:
                children[stack[-1]].append(v)
            elif v != 0:
                raise CodecError("geodesic tree text holds more than one tree")
            stack.append(v)
            i = j
        elif ch == ")":
            if not stack:
                raise CodecError("unbalanced parentheses in geodesic tree")
            stack.pop()
            i += 1
        else:
            raise CodecError(f"unexpected character {ch!r} in geodesic tree")
    if stack or not children:
        raise CodecError("unbalanced parentheses in geodesic tree")
    return GeodesicTree(children, heights)


def dumps_geodesic_tree(tree: GeodesicTree) -> str:
    return f"hypermap-geotree nodes {len(tree)}\n{tree.to_string()}\n"


def loads_geodesic_tree(text: str) -> GeodesicTree:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("hypermap-geotree"):
        raise CodecError("missing geodesic tree header")
    return parse_geodesic_tree("".join(lines[1:]))


Partition = Union[Sequence[int], Sequence[Sequence[int]]]


def block_sizes(forest: ReverseForest, partition: Partition) -> list[int]:
    """Normalize a partition given as block sizes or as lists of tree indices"""
    if all(isinstance(b, int) for b in partition):
        sizes = [int(b) for b in partition]
    else:
        sizes, expected = [], 0
        for block in partition:
            block = list(block)
            if block != list(range(expected, expected + len(block))):
                raise CodecError(f"partition block {block} is not consecutive from tree {expected}")
            sizes.append(len(block))
            expected += len(block)
    if any(s <= 0 for s in sizes):
        raise CodecError(f"empty partition block in {sizes}")
    if sum(sizes) != forest.num_trees:
        raise CodecError(f"partition covers {sum(sizes)} trees, forest has {forest.num_trees}")
    return sizes


def block_heights(forest: ReverseForest, sizes: Sequence[int]) -> list[int]:
    heights, start = [], 0
    for s in sizes:
        heights.append(max(forest.tree_height(t) for t in range(start, start + s)))
        start += s
    return heights


def u_tree(forest: ReverseForest, partition: Partition) -> GeodesicTree:
    """
    Genealogy of the infinite trees meeting the ball

    Block j of height h_j contributes the vertices (j, i) for
    r - h_j <= i <= r. Above its lowest vertex a block continues itself;
    its lowest vertex hangs from the closest block on its left that is
    still alive one level below.
    """
    r = forest.height
    sizes = block_sizes(forest, partition)
    heights = block_heights(forest, sizes)
    if heights[0] != r:
        raise CodecError(f"first block has height {heights[0]}, expected {r}")

    ids: dict[tuple[int, int], int] = {}
    for j, h in enumerate(heights):
        for i in range(r - h, r + 1):
            ids[(j, i)] = len(ids)
    children: list[list[int]] = [[] for _ in ids]
    node_heights = [0] * len(ids)
    for (j, i), v in ids.items():
        node_heights[v] = i
    # continuing vertex first, then later blocks left to right
    for j, h in enumerate(heights):
        for i in range(r - h + 1, r + 1):
            children[ids[(j, i - 1)]].append(ids[(j, i)])
    for j in range(1, len(heights)):
        i = r - heights[j]
        k = max((k for k in range(j) if heights[k] >= r - i + 1), default=None)
        if k is None:
            raise CodecError(f"block {j} of height {heights[j]} has no parent block")
        children[ids[(k, i - 1)]].append(ids[(j, i)])
    return GeodesicTree(children, node_heights, ids[(0, 0)])


def heights_from_tree(tree: GeodesicTree, r: int) -> list[int]:
    """
    Block heights read off a tree truncated at height r

    The first block has height r; block j's height is the smallest h such
    that the ancestor of the j-th leaf at height r - h is not a leftmost child.
    """
    parent: dict[int, int] = {}
    for v, cs in enumerate(tree.children):
        for c in cs:
            parent[c] = v
    leaves = [v for v in tree.leaves() if tree.heights[v] == r]
    if len(leaves) != len(tree.leaves()):
        raise CodecError("tree has leaves below the cut height")
    out = [r]
    for x in leaves[1:]:
        h, v = 0, x
        while tree.children[parent[v]][0] == v:
            v = parent[v]
            h += 1
        out.append(h)
    return out
