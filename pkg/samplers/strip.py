"""
Strips
Balls of the strips bounded by two leftmost geodesics
"""

from typing import Literal, Optional

from model.params import ModelParams
from planarmap.map import PlanarMap
from samplers.disk import DiskSampler
from samplers.hull import sample_fillings
from samplers.reverse_tree import ReverseTreeSampler
from samplers.rng import Rng, SamplerError
from skeleton.codec import STRIP, decode

S0 = "S0"
S1 = "S1"

StripVariant = Literal["S0", "S1"]


def sample_strip(params: ModelParams, variant: StripVariant, r: int, rng: Rng,
                 trees: Optional[ReverseTreeSampler] = None,
                 disks: Optional[DiskSampler] = None) -> PlanarMap:
    """
    Strip of height r with marked geodesic sides

    The skeleton is B_{r-1} of tau0 (S0) or of tau1 with its lowest vertex
    cut (S1); every vertex is filled. The sides are marked as gamma_left
    and gamma_right, the root sits at the bottom of gamma_right.
    """
    if r < 1:
        raise SamplerError(f"strip height must be positive, got {r}")
    trees = trees or ReverseTreeSampler(params)
    if variant == S0:
        forest = trees.sample_tau0(rng, r - 1)
    elif variant == S1:
        forest = trees.sample_tau1_star(rng, r - 1)
    else:
        raise SamplerError(f"unknown strip variant '{variant}'")
    return decode(sample_fillings(params, forest, rng, STRIP, disks))
