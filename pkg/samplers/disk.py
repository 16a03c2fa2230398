"""
Boltzmann Disks
Exact Boltzmann triangulations of the p-gon by peeling the root edge
"""

from typing import Optional

import numpy as np

from model.formulas import log_disk_weights
from model.params import ModelParams
from planarmap.builder import MapBuilder
from planarmap.map import PlanarMap
from planarmap.peeling import peel_boundary, peel_degenerate, peel_new_vertex
from samplers.rng import DEFAULT_SIZE_CAP, Rng, SamplerError, SizeCapExceeded, sample_cdf

FRESH = -1
DEGENERATE = -2


class DiskSampler:
    """
    Peeling kernel of Boltzmann triangulations

    From a hole of perimeter p the triangle on its first edge has a new
    vertex with probability lam w(p+1)/w(p), hits boundary vertex k+1 with
    probability w(k+1) w(p-k)/w(p), and for p = 2 the hole closes into a
    single edge with probability 1/w(p).
    """

    def __init__(self, params: ModelParams, size_cap: int = DEFAULT_SIZE_CAP):
        self.params = params
        self.size_cap = size_cap
        self._logw = log_disk_weights(params, 64)
        self._cdfs: dict[int, np.ndarray] = {}

    def log_w(self, pmax: int) -> np.ndarray:
        if pmax >= len(self._logw):
            self._logw = log_disk_weights(self.params, max(pmax, 2 * len(self._logw)))
        return self._logw

    def transition_weights(self, p: int) -> np.ndarray:
        """[fresh, hit 0, ..., hit p-1] followed by the closing weight when p = 2"""
        lw = self.log_w(p + 1)
        k = np.arange(p)
        hits = np.exp(lw[k + 1] + lw[p - k] - lw[p])
        fresh = self.params.lam * np.exp(lw[p + 1] - lw[p])
        out = np.concatenate([[fresh], hits])
        if p == 2:
            out = np.append(out, np.exp(-lw[2]))
        return out

    def _cdf(self, p: int) -> np.ndarray:
        cdf = self._cdfs.get(p)
        if cdf is None:
            cdf = np.cumsum(self.transition_weights(p))
            if len(self._cdfs) < 4096:
                self._cdfs[p] = cdf
        return cdf

    def step(self, rng: Rng, p: int) -> int:
        """FRESH, DEGENERATE or the boundary position k"""
        i = sample_cdf(rng, self._cdf(p))
        if i == 0:
            return FRESH
        if i == p + 1:
            return DEGENERATE
        return i - 1

    def peel_fill(self, builder: MapBuilder, chain: list[int], rng: Rng) -> None:
        """Fill a hole chain of the builder in place with a Boltzmann triangulation"""
        stack = [chain]
        while stack:
            hole = stack.pop()
            if builder.num_darts > self.size_cap:
                raise SizeCapExceeded(self.size_cap, "Boltzmann disk")
            move = self.step(rng, len(hole))
            if move == FRESH:
                stack.extend(peel_new_vertex(builder, hole))
            elif move == DEGENERATE:
                peel_degenerate(builder, hole)
            else:
                stack.extend(reversed(peel_boundary(builder, hole, move)))

    def sample(self, p: int, rng: Rng) -> PlanarMap:
        builder = MapBuilder()
        chain = builder.outer_face(p)
        self.peel_fill(builder, chain, rng)
        return builder.build(chain[0])


def sample_boltzmann_disk(params: ModelParams, p: int, rng: Rng,
                          size_cap: int = DEFAULT_SIZE_CAP,
                          sampler: Optional[DiskSampler] = None) -> PlanarMap:
    """
    Boltzmann triangulation of the p-gon: P(T = t) = lam^n(t) / w(p)

    Args:
        params: model parameters
        p: perimeter, p >= 1
        rng: random stream
        size_cap: maximum number of darts before giving up
        sampler: reuse the cached kernel of an existing DiskSampler

    Returns:
        The disk, rooted on its outer face
    """
    if p < 1:
        raise SamplerError(f"perimeter must be positive, got {p}")
    sampler = sampler or DiskSampler(params, size_cap)
    return sampler.sample(p, rng)


def inner_vertex_count(disk: PlanarMap) -> int:
    """Vertices not on the outer face"""
    outer = {disk.origin(d) for d in disk.face_cycle(disk.root)}
    return disk.num_vertices - len(outer)
