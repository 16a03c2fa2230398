"""
Map Validation
Structural checks on planar maps, reported rather than raised
"""

from pydantic import BaseModel, Field

from planarmap.map import BOTTOM, OUTER, TOP, PlanarMap

SIMPLE_ROLES = (OUTER, BOTTOM, TOP)


class Failure(BaseModel):
    check: str
    message: str
    darts: list[int] = Field(default_factory=list)


class ValidationReport(BaseModel):
    failures: list[Failure] = Field(default_factory=list)
    checks: list[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, check: str, message: str, darts=()) -> None:
        self.failures.append(Failure(check=check, message=message, darts=list(darts)[:20]))

    def summary(self) -> str:
        if self.passed:
            return f"✅ valid ({len(self.checks)} checks)"
        return "⚠️ " + "; ".join(f"{f.check}: {f.message}" for f in self.failures)


def validate(pmap: PlanarMap) -> ValidationReport:
    """
    Check the map invariants

    - alpha is a fixed-point-free involution and phi a permutation
    - every face is a triangle except marked holes
    - outer, bottom and top holes are bounded by simple cycles
    - the map is connected with Euler characteristic 2
    """
    report = ValidationReport()
    n = pmap.num_darts

    report.checks.append("involution")
    bad = [d for d in range(n) if not 0 <= pmap.alpha[d] < n or pmap.alpha[d] == d
           or pmap.alpha[pmap.alpha[d]] != d]
    if bad:
        report.fail("involution", "alpha is not a fixed-point-free involution", bad)
        return report

    report.checks.append("permutation")
    if sorted(pmap.phi) != list(range(n)):
        report.fail("permutation", "phi is not a permutation of the darts")
        return report

    report.checks.append("root")
    if not 0 <= pmap.root < n:
        report.fail("root", f"root dart {pmap.root} out of range")
        return report

    report.checks.append("holes")
    hole_faces = {}
    for role, d in pmap.holes.items():
        if not 0 <= d < n:
            report.fail("holes", f"hole '{role}' references missing dart {d}", [d])
            continue
        face = pmap.face_of[d]
        if face in hole_faces:
            report.fail("holes", f"holes '{role}' and '{hole_faces[face]}' share a face", [d])
        hole_faces[face] = role

    report.checks.append("triangles")
    seen_faces = set()
    for d in range(n):
        face = pmap.face_of[d]
        if face in seen_faces or face in hole_faces:
            continue
        seen_faces.add(face)
        cycle = pmap.face_cycle(d)
        if len(cycle) != 3:
            report.fail("triangles", f"non-triangle inner face of degree {len(cycle)}", cycle)

    report.checks.append("simple boundary")
    for role, d in pmap.holes.items():
        if role not in SIMPLE_ROLES or not 0 <= d < n:
            continue
        cycle = pmap.face_cycle(d)
        origins = [pmap.origin(e) for e in cycle]
        if len(set(origins)) != len(origins):
            report.fail("simple boundary", f"hole '{role}' boundary is not a simple cycle", cycle)

    report.checks.append("connected")
    reached = pmap.canonical_order()
    if len(reached) != n:
        missing = sorted(set(range(n)) - set(reached))
        report.fail("connected", f"{len(missing)} darts unreachable from the root", missing)

    report.checks.append("euler")
    chi = pmap.euler_characteristic()
    if chi != 2:
        report.fail("euler", f"V - E + F = {chi}, expected 2")

    return report
