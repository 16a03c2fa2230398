"""
Plane Hulls
Hulls of radius r around the root of the plane triangulation
"""

from typing import NamedTuple, Optional

from model.params import ModelParams
from planarmap.map import PlanarMap
from planarmap.root_transform import root_transform
from samplers.disk import DiskSampler
from samplers.reverse_tree import ReverseTreeSampler
from samplers.rng import Rng
from samplers.skeleton_f import sample_skeleton_F
from skeleton.codec import CYLINDER, Mode, SkeletonDecomposition, decode
from skeleton.forest import ReverseForest
from skeleton.utree import GeodesicTree


class HullSkeleton(NamedTuple):
    """Skeleton of a hull with the block structure of the forest it was cut from"""

    skeleton: SkeletonDecomposition
    sizes: list[int]
    u: GeodesicTree
    offset: int

    def block_ends(self) -> list[int]:
        """Index in the reordered ball of the last tree of each block"""
        q = self.skeleton.forest.num_trees
        ends, start = [], 0
        for s in self.sizes:
            ends.append((start + s - 1 - self.offset) % q)
            start += s
        return ends


def sample_fillings(params: ModelParams, forest: ReverseForest, rng: Rng,
                    mode: Mode = CYLINDER, disks: Optional[DiskSampler] = None) -> SkeletonDecomposition:
    """Independent Boltzmann triangulations of the (c_v + 2)-gons"""
    disks = disks or DiskSampler(params)
    sk = SkeletonDecomposition(forest, {}, mode)
    for v in sk.filled_vertices():
        sk.fillings[v] = disks.sample(forest.num_children(v) + 2, rng)
    return sk


def sample_hull_skeleton(params: ModelParams, r: int, rng: Rng,
                         trees: Optional[ReverseTreeSampler] = None,
                         disks: Optional[DiskSampler] = None) -> HullSkeleton:
    """Skeleton of the hull of radius r, before decoding"""
    forest, sizes, u = sample_skeleton_F(params, r, rng, trees)
    sk = sample_fillings(params, forest.reordered_ball(r), rng, CYLINDER, disks)
    return HullSkeleton(sk, sizes, u, forest.tree_of[forest.distinguished])


def sample_hull(params: ModelParams, r: int, rng: Rng,
                trees: Optional[ReverseTreeSampler] = None,
                disks: Optional[DiskSampler] = None) -> PlanarMap:
    """
    Hull of radius r of the plane triangulation, rooted at the origin

    Args:
        params: model parameters
        r: radius, r >= 1
        rng: random stream

    Returns:
        A triangulation with a top boundary at distance r from the root vertex
    """
    sample = sample_hull_skeleton(params, r, rng, trees, disks)
    return root_transform(decode(sample.skeleton))
