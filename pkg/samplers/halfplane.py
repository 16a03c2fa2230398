"""
Half-Plane Peeling
Explored region of the half-plane triangulation after a number of peeling steps
"""

from typing import Optional

from model.formulas import peeling_probabilities
from model.params import ModelParams
from planarmap.builder import MapBuilder
from planarmap.distances import INFINITY_MARK
from planarmap.map import BOTTOM, TOP, PlanarMap
from samplers.disk import DiskSampler
from samplers.rng import Rng
from samplers.tables import LazyCdf

CASE_FRESH = "I"
CASE_LEFT = "II"
CASE_RIGHT = "III"


class HalfPlanePeeler:
    """
    Peeling of the half-plane triangulation from its root edge

    The frontier is the list of open darts, left to right, separating the
    explored region from the rest. Each step reveals the triangle on the
    frontier edge at the peeling position:

    - I: a new vertex, with probability 1/sqrt(1+8h);
    - II_i: the third vertex lies i edges to the left, swallowing a hole
      of perimeter i+1 filled by a Boltzmann disk;
    - III_i: the same on the right.

    II_i and III_i each have probability (8+1/h)^-i w(i+1). Boundary edges
    of the half-plane are created only when a step reaches them.
    """

    def __init__(self, params: ModelParams, rng: Rng, disks: Optional[DiskSampler] = None):
        self.params = params
        self.rng = rng
        self.disks = disks or DiskSampler(params)
        self.fresh = params.peel_fresh
        self.swallow = LazyCdf(lambda n: peeling_probabilities(params, n - 1)[1], total=(1 - self.fresh) / 2)
        self.builder = MapBuilder()
        self.root = self.builder.new_dart()
        self.bottom = [self.root]
        self.frontier = [self.root]
        self.position = 0
        self.log: list[tuple[str, int]] = []

    def _extend_left(self, count: int) -> None:
        for _ in range(count):
            d = self.builder.new_dart()
            self.builder.phi[d] = self.bottom[0]
            self.bottom.insert(0, d)
            self.frontier.insert(0, d)
            self.position += 1

    def _extend_right(self, count: int) -> None:
        for _ in range(count):
            d = self.builder.new_dart()
            self.builder.phi[self.bottom[-1]] = d
            self.bottom.append(d)
            self.frontier.append(d)

    def step(self) -> tuple[str, int]:
        rng, k = self.rng, self.position
        if rng.random() < self.fresh:
            t0, t1, t2 = self.builder.new_triangle()
            self.builder.glue(t0, self.frontier[k])
            self.frontier[k : k + 1] = [t1, t2]
            case = (CASE_FRESH, 0)
        elif rng.random() < 0.5:
            i = self.swallow.sample(rng)
            if k - i < 0:
                self._extend_left(i - k)
                k = self.position
            t0, t1, t2 = self.builder.new_triangle()
            self.builder.glue(t0, self.frontier[k])
            hole = [t1] + self.frontier[k - i : k]
            self.frontier[k - i : k + 1] = [t2]
            self.position = k - i
            self.disks.peel_fill(self.builder, hole, rng)
            case = (CASE_LEFT, i)
        else:
            i = self.swallow.sample(rng)
            if k + i >= len(self.frontier):
                self._extend_right(k + i + 1 - len(self.frontier))
            t0, t1, t2 = self.builder.new_triangle()
            self.builder.glue(t0, self.frontier[k])
            hole = [t2] + self.frontier[k + 1 : k + i + 1]
            self.frontier[k : k + i + 1] = [t1]
            self.disks.peel_fill(self.builder, hole, rng)
            case = (CASE_RIGHT, i)
        self.log.append(case)
        return case

    def build(self) -> PlanarMap:
        """
        Close the explored region

        The half-plane boundary becomes a finite bottom face closed by an
        artificial edge marked as "infinity"; the unexplored side becomes
        the top face.
        """
        builder = self.builder
        closing = builder.new_dart()
        builder.phi[self.bottom[-1]] = closing
        builder.phi[closing] = self.bottom[0]
        builder.close_hole(self.frontier + [closing], TOP)
        builder.holes[BOTTOM] = self.root
        builder.marked[INFINITY_MARK] = [closing]
        return builder.build(self.root)


def sample_halfplane_ball(params: ModelParams, peel_steps: int, rng: Rng,
                          disks: Optional[DiskSampler] = None) -> tuple[PlanarMap, list[tuple[str, int]]]:
    """
    Run peel_steps peeling steps from the root edge

    Returns:
        (explored map, case log)
    """
    peeler = HalfPlanePeeler(params, rng, disks)
    for _ in range(peel_steps):
        peeler.step()
    return peeler.build(), peeler.log
