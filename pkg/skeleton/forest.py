"""
Reverse Forests
Finite plane forests read from the top, with a distinguished bottom vertex
"""

from functools import cached_property
from typing import Optional, Sequence


class CodecError(ValueError):
    """Raised on malformed forests, skeletons or cylinders"""


# A plane tree is a nested list: the list of its children's subtrees.
Tree = list


class ReverseForest:
    """
    Ordered plane trees whose roots sit at reverse height r

    Vertices are numbered in preorder across the forest, tree after tree.
    The reverse height of a vertex is r minus its depth, so leaves at depth
    r lie at reverse height 0, where the distinguished vertex sits.
    """

    def __init__(self, children: list[list[int]], roots: list[int], height: int, distinguished: int):
        self.children = children
        self.roots = roots
        self.height = height
        self.distinguished = distinguished
        self.depth = [0] * len(children)
        self.tree_of = [0] * len(children)
        self.parent: list[Optional[int]] = [None] * len(children)
        for t, root in enumerate(roots):
            stack = [root]
            while stack:
                v = stack.pop()
                self.tree_of[v] = t
                for c in self.children[v]:
                    self.depth[c] = self.depth[v] + 1
                    self.parent[c] = v
                    stack.append(c)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_trees(cls, trees: Sequence[Tree], height: int, path: Sequence[int]) -> "ReverseForest":
        """
        Build from nested lists

        Args:
            trees: plane trees as nested child lists
            height: r
            path: tree index followed by child indices leading to the distinguished vertex
        """
        children: list[list[int]] = []
        roots: list[int] = []

        def add(tree: Tree) -> int:
            v = len(children)
            children.append([])
            for sub in tree:
                children[v].append(add(sub))
            return v

        for tree in trees:
            roots.append(add(tree))
        if not path:
            raise CodecError("empty distinguished path")
        v = roots[path[0]]
        for i in path[1:]:
            v = children[v][i]
        return cls(children, roots, height, v)

    def to_trees(self) -> list[Tree]:
        def nest(v: int) -> Tree:
            return [nest(c) for c in self.children[v]]

        return [nest(root) for root in self.roots]

    def path_of(self, v: int) -> list[int]:
        """Tree index then child indices from the root down to v"""
        steps = []
        while self.parent[v] is not None:
            p = self.parent[v]
            steps.append(self.children[p].index(v))
            v = p
        return [self.roots.index(v)] + steps[::-1]

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.children)

    @property
    def num_trees(self) -> int:
        return len(self.roots)

    def reverse_height(self, v: int) -> int:
        return self.height - self.depth[v]

    def num_children(self, v: int) -> int:
        return len(self.children[v])

    @cached_property
    def levels(self) -> list[list[int]]:
        """Vertices grouped by depth, each group left to right"""
        out: list[list[int]] = [[] for _ in range(max(self.depth, default=0) + 1)]
        for v, d in enumerate(self.depth):
            out[d].append(v)
        return out

    def level(self, j: int) -> list[int]:
        """Vertices at reverse height j, left to right"""
        d = self.height - j
        return list(self.levels[d]) if 0 <= d < len(self.levels) else []

    def tree_height(self, t: int) -> int:
        root = self.roots[t]
        best, stack = 0, [root]
        while stack:
            v = stack.pop()
            best = max(best, self.depth[v])
            stack.extend(self.children[v])
        return best

    @property
    def bottom_size(self) -> int:
        """p: number of vertices at reverse height 0"""
        return sum(1 for d in self.depth if d == self.height)

    def inner_vertices(self) -> list[int]:
        """Vertices at positive reverse height, which carry a filling in a cylinder"""
        return [v for v in range(len(self.children)) if self.depth[v] < self.height]

    def is_preadmissible(self) -> bool:
        return (max(self.depth, default=-1) == self.height
                and self.depth[self.distinguished] == self.height)

    def is_admissible(self) -> bool:
        return self.is_preadmissible() and self.tree_of[self.distinguished] == 0

    def key(self) -> tuple:
        return (self.height, repr(self.to_trees()), tuple(self.path_of(self.distinguished)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ReverseForest) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"ReverseForest(r={self.height}, trees={self.num_trees}, p={self.bottom_size}, n={len(self)})"

    # ------------------------------------------------------------------
    # Balls
    # ------------------------------------------------------------------

    def rotate(self, k: int) -> "ReverseForest":
        """Cyclic rotation putting tree k first"""
        trees = self.to_trees()
        path = self.path_of(self.distinguished)
        q = len(trees)
        path[0] = (path[0] - k) % q
        return ReverseForest.from_trees(trees[k:] + trees[:k], self.height, path)

    def ball(self, j: int) -> "ReverseForest":
        """
        B_j: the trees of descendants of the vertices at reverse height j

        The distinguished vertex is kept.
        """
        if not 0 <= j <= self.height:
            raise CodecError(f"ball radius {j} outside [0, {self.height}]")
        tops = self.level(j)

        def nest(v: int) -> Tree:
            return [nest(c) for c in self.children[v]]

        anc, steps = self.distinguished, []
        while self.depth[anc] > self.height - j:
            p = self.parent[anc]
            steps.append(self.children[p].index(anc))
            anc = p
        return ReverseForest.from_trees([nest(v) for v in tops], j, [tops.index(anc)] + steps[::-1])

    def reordered_ball(self, j: int) -> "ReverseForest":
        """B'_j: B_j rotated so that the distinguished vertex's tree comes first"""
        b = self.ball(j)
        return b.rotate(b.tree_of[b.distinguished])


def tree_to_string(tree: Tree) -> str:
    return "(" + "".join(tree_to_string(c) for c in tree) + ")"


def parse_trees(text: str) -> list[Tree]:
    trees: list[Tree] = []
    stack: list[Tree] = []
    for ch in text:
        if ch == "(":
            node: Tree = []
            if stack:
                stack[-1].append(node)
            stack.append(node)
        elif ch == ")":
            if not stack:
                raise CodecError("unbalanced parentheses in forest")
            node = stack.pop()
            if not stack:
                trees.append(node)
        elif not ch.isspace():
            raise CodecError(f"unexpected character {ch!r} in forest")
    if stack:
        raise CodecError("unbalanced parentheses in forest")
    return trees


def dumps_forest(forest: ReverseForest) -> str:
    """
    Format:
        hypermap-forest r <r>
        trees <parenthesized trees>
        distinguished <tree index> <child index> ...
    """
    trees = "".join(tree_to_string(t) for t in forest.to_trees())
    path = " ".join(map(str, forest.path_of(forest.distinguished)))
    return f"hypermap-forest r {forest.height}\ntrees {trees}\ndistinguished {path}\n"


def loads_forest(text: str) -> ReverseForest:
    fields = {}
    for line in text.splitlines():
        parts = line.split(None, 1)
        if parts:
            fields[parts[0]] = parts[1] if len(parts) > 1 else ""
    if "hypermap-forest" not in fields:
        raise CodecError("missing forest header")
    height = int(fields["hypermap-forest"].split()[1])
    trees = parse_trees(fields.get("trees", ""))
    path = [int(x) for x in fields.get("distinguished", "").split()]
    return ReverseForest.from_trees(trees, height, path)
