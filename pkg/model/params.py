"""
Model Parameters
Resolution of the lambda / h / m parameterizations and the derived constants
"""

import math
from typing import Union

import mpmath
from pydantic import BaseModel, ConfigDict

mpmath.mp.dps = 50

Real = Union[float, int, mpmath.mpf]

# Critical value 1/(12*sqrt(3)), evaluated once in extended precision
LAMBDA_C_MP = 1 / (12 * mpmath.sqrt(3))
LAMBDA_C = float(LAMBDA_C_MP)

CRITICAL_TOL = 1e-13
DOMAIN_TOL = 1e-15


class ModelError(ValueError):
    """Raised when a parameter or an argument lies outside the model's domain"""


def lambda_of_h(h: Real) -> mpmath.mpf:
    """lambda = h / (1 + 8h)^(3/2)"""
    h = mpmath.mpf(h)
    return h / (1 + 8 * h) ** mpmath.mpf(1.5)


def solve_h(lam: Real) -> float:
    """
    Invert lambda = h/(1+8h)^(3/2) on (0, 1/4]

    Bisection to 1e-14 followed by one Newton polish, carried out in
    extended precision so that values of lambda close to the critical
    point (where the map h -> lambda is flat) still resolve h.

    Args:
        lam: Boltzmann weight per inner vertex, 0 < lam <= lambda_c

    Returns:
        The unique h in (0, 1/4]
    """
    lam = mpmath.mpf(lam)
    if lam <= 0:
        raise ModelError(f"lambda must be positive, got {lam}")
    if lam > LAMBDA_C_MP + DOMAIN_TOL:
        raise ModelError(f"lambda={float(lam)} exceeds lambda_c={LAMBDA_C}")
    if abs(lam - LAMBDA_C_MP) < CRITICAL_TOL:
        return 0.25

    lo, hi = mpmath.mpf(0), mpmath.mpf(0.25)
    # lambda(h) is increasing on (0, 1/4]
    while hi - lo > mpmath.mpf(10) ** -30:
        mid = (lo + hi) / 2
        if lambda_of_h(mid) < lam:
            lo = mid
        else:
            hi = mid
    h = (lo + hi) / 2

    # Newton polish: d lambda/dh = (1-4h)/(1+8h)^(5/2)
    slope = (1 - 4 * h) / (1 + 8 * h) ** mpmath.mpf(2.5)
    if slope > 0:
        h = h - (lambda_of_h(h) - lam) / slope
    return float(min(max(h, mpmath.mpf(0)), mpmath.mpf(0.25)))


class ModelParams(BaseModel):
    """lambda and every derived constant; immutable and hashable"""

    model_config = ConfigDict(frozen=True)

    lam: float
    h: float
    m: float
    b: float
    is_critical: bool

    @classmethod
    def from_h(cls, h: float) -> "ModelParams":
        if not 0 < h <= 0.25:
            raise ModelError(f"h must lie in (0, 1/4], got {h}")
        lam = float(lambda_of_h(h))
        is_critical = h == 0.25 or abs(lam - LAMBDA_C) < CRITICAL_TOL
        if is_critical:
            return cls(lam=LAMBDA_C, h=0.25, m=1.0, b=0.0, is_critical=True)
        sigma = math.sqrt(1 - 4 * h)
        m = (1 - 2 * h - sigma) / (2 * h)
        b = math.acosh(1 / math.sqrt(4 * h))
        return cls(lam=lam, h=h, m=m, b=b, is_critical=False)

    @classmethod
    def from_lambda(cls, lam: Real) -> "ModelParams":
        return cls.from_h(solve_h(lam))

    @classmethod
    def from_m(cls, m: float) -> "ModelParams":
        """h = m/(1+m)^2 inverts m(h) on (0, 1]"""
        if not 0 < m <= 1:
            raise ModelError(f"m must lie in (0, 1], got {m}")
        if m == 1:
            return cls.from_h(0.25)
        return cls.from_h(m / (1 + m) ** 2)

    @classmethod
    def critical(cls) -> "ModelParams":
        return cls.from_h(0.25)

    @property
    def sigma(self) -> float:
        """sqrt(1 - 4h)"""
        return math.sqrt(max(0.0, 1 - 4 * self.h))

    @property
    def a(self) -> float:
        """8 + 1/h, the inverse radius of convergence of the cone series"""
        return 8 + 1 / self.h

    @property
    def peel_fresh(self) -> float:
        """Probability that a half-plane peeling step discovers a new vertex"""
        return 1 / math.sqrt(1 + 8 * self.h)

    def describe(self) -> str:
        regime = "critical" if self.is_critical else "subcritical"
        return f"lambda={self.lam:.10g} h={self.h:.10g} m={self.m:.10g} ({regime})"
