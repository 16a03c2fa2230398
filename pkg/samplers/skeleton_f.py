"""
Plane Skeleton
The forest F whose reordered balls are the skeletons of the hulls of the plane
"""

from typing import Optional

from model.params import ModelParams
from samplers.reverse_tree import ReverseTreeSampler
from samplers.rng import Rng, SamplerError
from skeleton.forest import ReverseForest
from skeleton.utree import GeodesicTree, heights_from_tree

DEFAULT_NODE_CAP = 2_000_000


def sample_geodesic_tree(params: ModelParams, r: int, rng: Rng,
                         node_cap: int = DEFAULT_NODE_CAP) -> GeodesicTree:
    """
    GW(mu) tree cut at height r, mu(k) = m (1-m)^(k-1) for k >= 1

    At the critical point every vertex has one child and the tree is a path.
    """
    if params.is_critical:
        return GeodesicTree.path(r)
    children: list[list[int]] = [[]]
    heights = [0]
    stack = [0]
    while stack:
        v = stack.pop()
        if heights[v] == r:
            continue
        k = int(rng.geometric(params.m))
        if len(children) + k > node_cap:
            raise SamplerError(f"geodesic tree exceeded {node_cap} vertices at radius {r}")
        for _ in range(k):
            children.append([])
            heights.append(heights[v] + 1)
            children[v].append(len(children) - 1)
        stack.extend(reversed(children[v]))
    return GeodesicTree(children, heights)


def sample_skeleton_F(params: ModelParams, r: int, rng: Rng,
                      sampler: Optional[ReverseTreeSampler] = None) -> tuple[ReverseForest, list[int], GeodesicTree]:
    """
    B_r(F) with its block structure

    U is drawn first; its leaves give the heights of the blocks. The first
    block is a ball of tau1 of radius r, the others are independent balls
    of tau0 with the heights read from U.

    Returns:
        (forest, block sizes, U)
    """
    if r < 1:
        raise SamplerError(f"radius must be positive, got {r}")
    sampler = sampler or ReverseTreeSampler(params)
    u = sample_geodesic_tree(params, r, rng)
    heights = heights_from_tree(u, r)

    first = sampler.sample_tau1(rng, r)
    trees = first.to_trees()
    path = first.path_of(first.distinguished)
    sizes = [first.num_trees]
    for h in heights[1:]:
        block = sampler.sample_tau0(rng, h)
        trees.extend(block.to_trees())
        sizes.append(block.num_trees)
    forest = ReverseForest.from_trees(trees, r, path)
    return forest, sizes, u
