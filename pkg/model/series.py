"""
Series Tables
Truncated coefficient vectors, the perimeter transition kernel of hulls and the
coefficient identities tying pi, h and the geodesic offspring law together
"""

import csv
import sys
from enum import Enum
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict

from model import formulas
from model.params import ModelError, ModelParams

DEFAULT_ORDER = 512
TAIL_TOLERANCE = 1e-6


class SeriesKind(str, Enum):
    DISK_W = "disk_w"
    CONE_C = "cone_c"
    THETA = "theta"
    PI = "pi"
    MU = "mu"
    COUNT_TNP = "countTnp"


class SeriesTable(BaseModel):
    """Coefficients of one series, indexed from `start`"""

    model_config = ConfigDict(frozen=True)

    kind: SeriesKind
    start: int
    coefficients: tuple

    def __getitem__(self, index: int):
        return self.coefficients[index - self.start]

    def __len__(self) -> int:
        return len(self.coefficients)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["index", "value"])
            for offset, value in enumerate(self.coefficients):
                writer.writerow([self.start + offset, value])


def series_table(params: ModelParams, kind: SeriesKind, order: int = DEFAULT_ORDER, n: int = 0) -> SeriesTable:
    """
    Build the table of one series up to `order`

    Args:
        params: model parameters
        kind: which series
        order: largest index
        n: inner-vertex count, used only by the enumeration table (indexed by p)
    """
    kind = SeriesKind(kind)
    if kind is SeriesKind.DISK_W:
        values, start = np.exp(formulas.log_disk_weights(params, order))[1:], 1
    elif kind is SeriesKind.CONE_C:
        values, start = np.exp(formulas.log_cone_weights(params, order))[1:], 1
    elif kind is SeriesKind.THETA:
        values, start = formulas.theta_array(params, order), 0
    elif kind is SeriesKind.PI:
        values, start = formulas.pi_coeffs(params, order)[1:], 1
    elif kind is SeriesKind.MU:
        values, start = formulas.mu_array(params, order)[1:], 1
    else:
        counts = tuple(formulas.count_triangulations(n, p) for p in range(1, order + 1))
        return SeriesTable(kind=kind, start=1, coefficients=counts)
    return SeriesTable(kind=kind, start=start, coefficients=tuple(float(v) for v in values))


# ============================================================================
# Power-series arithmetic on truncated coefficient vectors
# ============================================================================


def series_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(a[: order + 1], b[: order + 1])[: order + 1]


def series_inverse(a: np.ndarray, order: int) -> np.ndarray:
    """1/a(x) for a(0) != 0"""
    if a[0] == 0:
        raise ModelError("series with zero constant term is not invertible")
    out = np.zeros(order + 1)
    out[0] = 1 / a[0]
    padded = np.zeros(order + 1)
    padded[: min(len(a), order + 1)] = a[: order + 1]
    for k in range(1, order + 1):
        out[k] = -np.dot(padded[1 : k + 1], out[k - 1 :: -1][:k]) / a[0]
    return out


def taylor_coefficients(fn: Callable, order: int) -> list:
    """Coefficients of fn at 0 by high-precision numerical differentiation"""
    return [float(c) for c in mpmath.taylor(fn, mpmath.mpf(0), order)]


# ============================================================================
# Perimeter transition kernel
# ============================================================================


@lru_cache(maxsize=16)
def _offspring_matrix(params: ModelParams, size: int) -> np.ndarray:
    """M[k, j] = [x^j] g(x)^k, truncated to 0 <= k, j <= size"""
    th = formulas.theta_array(params, size)
    M = np.zeros((size + 1, size + 1))
    M[0, 0] = 1.0
    row = M[0]
    for k in range(1, size + 1):
        row = series_mul(row, th, size)
        M[k] = row
    return M


class Transition(NamedTuple):
    value: float
    tail: float


def reverse_step_probabilities(params: ModelParams, steps: int, size: int) -> np.ndarray:
    """P_q(X(steps) = p) for 0 <= q, p <= size: the reverse GW(theta) chain"""
    return np.linalg.matrix_power(_offspring_matrix(params, size), steps)


def transition_kernel(params: ModelParams, steps: int, size: int) -> np.ndarray:
    """
    K[p, q] = P(perimeter q after `steps` layers | perimeter p), 1 <= p, q <= size

    Row and column 0 are unused. The mass missing from a row is the
    truncation tail.
    """
    P = reverse_step_probabilities(params, steps, size)
    hw = formulas.h_weights(params, size)
    K = np.zeros((size + 1, size + 1))
    K[1:, 1:] = (hw[None, 1:] / hw[1:, None]) * P[1:, 1:].T
    return K


def perimeter_transition_with_tail(params: ModelParams, p: int, q: int, steps: int,
                                   size: Optional[int] = None) -> Transition:
    if p < 1 or q < 1 or steps < 0:
        raise ModelError(f"invalid transition arguments (p={p}, q={q}, steps={steps})")
    if steps == 0:
        return Transition(1.0 if p == q else 0.0, 0.0)
    size = size or max(2 * max(p, q), 64)
    K = transition_kernel(params, steps, size)
    return Transition(float(K[p, q]), float(max(0.0, 1.0 - K[p, 1:].sum())))


def perimeter_transition(params: ModelParams, p: int, q: int, steps: int, size: Optional[int] = None) -> float:
    """
    Probability that the hull perimeter moves from p to q in `steps` layers

    (h(q)/h(p)) P_q(X(steps) = p), with P_q read off a truncated power of the
    offspring matrix. A tail above TAIL_TOLERANCE is reported on stderr.
    """
    result = perimeter_transition_with_tail(params, p, q, steps, size)
    if result.tail > TAIL_TOLERANCE:
        print(f"⚠️ transition truncation tail {result.tail:.2e} exceeds {TAIL_TOLERANCE:.0e}", file=sys.stderr)
    return result.value


# ============================================================================
# Coefficient identities
# ============================================================================


def pi_composition_coefficients(params: ModelParams, pmax: int) -> np.ndarray:
    """
    Coefficients of x P'(x) / (1 - sigma P(x)), P the pi series

    Coefficient p equals sum over compositions p_1 + ... + p_l = p of
    sigma^(l-1) p_1 prod pi(p_j).
    """
    pi = formulas.pi_coeffs(params, pmax)
    pi[0] = 0.0
    x_pprime = np.arange(pmax + 1) * pi
    return series_mul(x_pprime, series_inverse(np.concatenate([[1.0], -params.sigma * pi[1:]]), pmax), pmax)


def h_ratio_coefficients(params: ModelParams, pmax: int) -> np.ndarray:
    """p h(p) / h(1) for p = 0..pmax"""
    hw = formulas.h_weights(params, pmax)
    return np.arange(pmax + 1) * hw / hw[1]
