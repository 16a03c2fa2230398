"""
Random Walk
Simple random walk on sampled hulls, killed on the top boundary
"""

from typing import NamedTuple, Optional

import numpy as np

from experiments.report import DEFAULT_THRESHOLD, StatReport
from experiments.stats import mean_estimate
from model.params import ModelParams
from planarmap.distances import DistanceField, adjacency, distances
from planarmap.map import TOP, PlanarMap
from samplers.hull import sample_hull
from samplers.rng import Rng, Seed, make_rng

LAZY_STAY = 0.5


class Walk(NamedTuple):
    distance: int
    time: int
    exited: bool

    @property
    def speed(self) -> float:
        return self.distance / self.time if self.time else 0.0


def random_walk(pmap: PlanarMap, steps: int, rng: Rng, lazy: bool = False,
                dist: Optional[DistanceField] = None) -> Walk:
    """
    Walk from the root vertex for `steps` steps or until it hits the top boundary

    Multiple edges are weighted by multiplicity; a lazy walk stays put
    with probability one half at every step.
    """
    if dist is None:
        dist = distances(pmap, "root")
    adj = adjacency(pmap)
    boundary = {pmap.origin(d) for d in pmap.hole_cycle(TOP)} if TOP in pmap.holes else set()
    v = pmap.origin(pmap.root)
    for t in range(1, steps + 1):
        if lazy and rng.random() < LAZY_STAY:
            continue
        v = adj[v][int(rng.integers(len(adj[v])))]
        if v in boundary:
            return Walk(dist[v], t, True)
    return Walk(dist[v], steps, False)


def simulate_srw(params: ModelParams, r: int, steps: int, N: int, seed: Seed = None,
                 lazy: bool = False, threshold: float = DEFAULT_THRESHOLD) -> StatReport:
    """
    Displacement per step of walks on N independent hulls of radius r

    Passes when the lower end of the 3-sigma interval of the speed is
    positive; at the critical point the estimate is reported without a claim.
    """
    rng = make_rng(seed)
    speeds, exits = [], 0
    for _ in range(N):
        hull = sample_hull(params, r, rng)
        walk = random_walk(hull, steps, rng, lazy)
        exits += walk.exited
        speeds.append(walk.speed)
    est = mean_estimate(speeds)
    lo, hi = est.interval()
    notes = []
    if params.is_critical:
        notes.append("critical point: diffusive regime, positivity not asserted")
    if exits:
        notes.append(f"{exits} walks reached the top boundary before {steps} steps")
    return StatReport(
        name="srw",
        params={"h": params.h, "lam": params.lam, "r": r, "steps": steps, "N": N, "lazy": lazy},
        seed=seed if isinstance(seed, int) else None,
        sample_size=N,
        test="mean_speed",
        statistic=est.mean,
        interval=(lo, hi),
        threshold=threshold,
        passed=params.is_critical or lo > 0,
        details={"stderr": est.stderr, "exits": exits},
        notes=notes,
        samples=speeds,
    )
