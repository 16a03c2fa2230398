"""
Closed Forms
Enumeration, disk and cone weights, the offspring law of the reverse process
and its quasi-stationary measure
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
import numpy as np
from scipy.special import gammaln

from model.params import ModelError, ModelParams

Number = Union[float, mpmath.mpf]


def _sqrt(x: Number) -> Number:
    return mpmath.sqrt(x) if isinstance(x, mpmath.mpf) else math.sqrt(x)


def _log_central_binomial(k: np.ndarray) -> np.ndarray:
    """log C(2k, k)"""
    return gammaln(2 * k + 1) - 2 * gammaln(k + 1)


# ============================================================================
# Enumeration
# ============================================================================


def double_factorial(n: int) -> int:
    """n!! with the conventions 0!! = (-1)!! = 1"""
    if n < -1:
        raise ModelError(f"double factorial undefined for {n}")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


@lru_cache(maxsize=None)
def count_triangulations(n: int, p: int) -> int:
    """
    Number of rooted type-I triangulations of the p-gon with n inner vertices

    Args:
        n: number of inner vertices (n >= 0)
        p: boundary length (p >= 1)

    Returns:
        The exact count; the 1-gon without inner vertex counts 0
    """
    if n < 0 or p < 1:
        raise ModelError(f"invalid size (n={n}, p={p})")
    if 2 * p + 3 * n - 5 < -1:
        return 0
    value = (
        Fraction(p * math.factorial(2 * p), math.factorial(p) ** 2)
        * Fraction(4) ** (n - 1)
        * Fraction(double_factorial(2 * p + 3 * n - 5),
                   math.factorial(n) * double_factorial(2 * p + n - 1))
    )
    if value.denominator != 1:
        raise ModelError(f"non-integral count at (n={n}, p={p}): {value}")
    return int(value)


# ============================================================================
# Disk weights w(p) and W(x)
# ============================================================================


def log_disk_weights(params: ModelParams, pmax: int) -> np.ndarray:
    """log w(p) for p = 0..pmax (entry 0 is -inf)"""
    h = params.h
    out = np.full(pmax + 1, -np.inf)
    if pmax >= 1:
        out[1] = math.log(disk_weight_one(params))
    if pmax >= 2:
        p = np.arange(2, pmax + 1, dtype=float)
        # (2p-5)!! = (2p-4)! / (2^(p-2) (p-2)!) for p >= 3, and 1 for p = 2
        log_df = np.where(
            p >= 3,
            gammaln(np.maximum(2 * p - 3, 1)) - (p - 2) * math.log(2) - gammaln(np.maximum(p - 1, 1)),
            0.0,
        )
        out[2:] = (
            p * math.log(2 + 16 * h)
            + log_df
            - gammaln(p + 1)
            + np.log((1 - 4 * h) * p + 6 * h)
            - math.log(4)
            - 1.5 * math.log(1 + 8 * h)
        )
    return out


def disk_weight_one(params: ModelParams) -> float:
    h = params.h
    return 0.5 - (1 + 2 * h) / (2 * math.sqrt(1 + 8 * h))


def disk_weight(params: ModelParams, p: int) -> float:
    """Boltzmann partition function w(p) of triangulations of the p-gon"""
    if p < 1:
        raise ModelError(f"perimeter must be positive, got {p}")
    if p == 1:
        return disk_weight_one(params)
    return float(np.exp(log_disk_weights(params, p)[p]))


def disk_generating(params: ModelParams, x: Number) -> Number:
    """W(x) = sum_p w(p) x^p, valid for 0 <= x <= 1/(4(1+8h))"""
    h, lam = params.h, params.lam
    limit = 1 / (4 * (1 + 8 * h))
    if x > limit * (1 + 1e-15) or x < -limit:
        raise ModelError(f"x={x} outside the domain of W (radius {limit})")
    root = _sqrt(max(1 - 4 * (1 + 8 * h) * x, 0 * x))
    return (lam / 2) * ((1 - (1 + 8 * h) * x / h) * root - 1 + x / lam)


def tutte_residual(params: ModelParams, p: int) -> float:
    """w(p) - [p == 2] - lam w(p+1) - sum_k w(k+1) w(p-k); zero for every p >= 1"""
    w = np.exp(log_disk_weights(params, p + 1))
    split = sum(w[k + 1] * w[p - k] for k in range(p))
    return float(w[p] - (1.0 if p == 2 else 0.0) - params.lam * w[p + 1] - split)


# ============================================================================
# Cone weights c(p) and C(x)
# ============================================================================


def partial_central_sums(params: ModelParams, pmax: int) -> np.ndarray:
    """S_p = sum_{q<p} C(2q,q) h^q for p = 0..pmax"""
    q = np.arange(0, max(pmax, 1), dtype=float)
    terms = np.exp(_log_central_binomial(q) + q * math.log(params.h))
    sums = np.concatenate([[0.0], np.cumsum(terms)])
    return sums[: pmax + 1]


def log_cone_weights(params: ModelParams, pmax: int) -> np.ndarray:
    """log c(p) for p = 0..pmax (entry 0 is -inf)"""
    sums = partial_central_sums(params, pmax)
    p = np.arange(pmax + 1, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(p >= 1, (p - 1) * math.log(params.a) + np.log(sums) - math.log(params.lam), -np.inf)


def cone_weight(params: ModelParams, p: int) -> float:
    """c(p) = (1/lam) (8+1/h)^(p-1) sum_{q<p} C(2q,q) h^q"""
    if p < 1:
        raise ModelError(f"perimeter must be positive, got {p}")
    return float(np.exp(log_cone_weights(params, p)[p]))


def cone_generating(params: ModelParams, x: Number) -> Number:
    """C(x) = x / (lam (1 - a x) sqrt(1 - 4 h a x)), a = 8 + 1/h"""
    a, h = params.a, params.h
    if not abs(x) < 1 / a:
        raise ModelError(f"x={x} outside the domain of C (radius {1 / a})")
    return x / (params.lam * (1 - a * x) * _sqrt(1 - 4 * h * a * x))


def h_weights(params: ModelParams, pmax: int) -> np.ndarray:
    """h(p) = (1/p) (8+1/h)^(-p) c(p) = S_p / (p lam a) for p = 0..pmax (entry 0 is 0)"""
    sums = partial_central_sums(params, pmax)
    p = np.arange(pmax + 1, dtype=float)
    out = np.zeros(pmax + 1)
    out[1:] = sums[1:] / (p[1:] * params.lam * params.a)
    return out


def h_weight(params: ModelParams, p: int) -> float:
    if p < 1:
        raise ModelError(f"perimeter must be positive, got {p}")
    return float(h_weights(params, p)[p])


# ============================================================================
# Offspring law theta and its generating function g
# ============================================================================


def log_theta(params: ModelParams, imax: int) -> np.ndarray:
    """log theta(i) for i = 0..imax"""
    h = params.h
    i = np.arange(imax + 1, dtype=float)
    return (
        -0.5 * math.log(1 + 8 * h)
        + i * math.log(h / (1 + 8 * h))
        + log_disk_weights(params, imax + 2)[2:]
    )


def theta_array(params: ModelParams, imax: int) -> np.ndarray:
    return np.exp(log_theta(params, imax))


def theta(params: ModelParams, i: int) -> float:
    """theta(i) = (1/sqrt(1+8h)) (h/(1+8h))^i w(i+2)"""
    if i < 0:
        raise ModelError(f"offspring count must be nonnegative, got {i}")
    return float(theta_array(params, i)[i])


def g(params: ModelParams, x: Number) -> Number:
    """
    Generating function of theta

    Written as 2/(1+s) - 4h/(1+s)^2 with s = sqrt(1 - 4hx), which is
    free of cancellation at small h.
    """
    s = _sqrt(1 - 4 * params.h * x)
    return 2 / (1 + s) - 4 * params.h / (1 + s) ** 2


def g_prime(params: ModelParams, x: Number) -> Number:
    h = params.h
    s = _sqrt(1 - 4 * h * x)
    return (2 * h / s) * (2 / (1 + s) ** 2 - 8 * h / (1 + s) ** 3)


def g_iter(params: ModelParams, r: int, x: Number) -> Number:
    """r-fold iterate of g in closed form"""
    if r < 0:
        raise ModelError(f"iteration count must be nonnegative, got {r}")
    if r == 0:
        return x
    if x >= 1:
        return 1 + 0 * x
    if params.is_critical:
        return 1 - (r + 1 / _sqrt(1 - x)) ** -2
    h, sig2 = params.h, 1 - 4 * params.h
    if isinstance(x, mpmath.mpf):
        arg = mpmath.asinh(mpmath.sqrt(sig2 / (4 * h * (1 - x)))) + r * params.b
        return 1 - sig2 / (4 * h * mpmath.sinh(arg) ** 2)
    arg = math.asinh(math.sqrt(sig2 / (4 * h * (1 - x)))) + r * params.b
    if arg > 350:
        return 1.0
    return 1 - sig2 / (4 * h * math.sinh(arg) ** 2)


@lru_cache(maxsize=64)
def _height_cdf_cached(params: ModelParams, rmax: int) -> tuple:
    return tuple(g_iter(params, r, 0.0) for r in range(rmax + 1))


def height_cdf(params: ModelParams, rmax: int) -> np.ndarray:
    """G_r = g_iter(r, 0) = P(GW(theta) tree has height < r), r = 0..rmax"""
    return np.array(_height_cdf_cached(params, rmax))


@lru_cache(maxsize=64)
def _height_survival_cached(params: ModelParams, rmax: int) -> tuple:
    out = [1.0]
    if params.is_critical:
        return tuple([1.0] + [(r + 1.0) ** -2 for r in range(1, rmax + 1)])
    h, sig2 = params.h, 1 - 4 * params.h
    a0 = math.asinh(math.sqrt(sig2 / (4 * h)))
    for r in range(1, rmax + 1):
        a = a0 + r * params.b
        # log sinh(a) without overflow
        log_sinh = a + math.log1p(-math.exp(-2 * a)) - math.log(2)
        out.append(math.exp(math.log(sig2 / (4 * h)) - 2 * log_sinh))
    return tuple(out)


def height_survival(params: ModelParams, rmax: int) -> np.ndarray:
    """E_r = 1 - G_r = P(GW(theta) tree reaches height r), accurate where G_r rounds to 1"""
    return np.array(_height_survival_cached(params, rmax))


def power_difference(a_survival: float, b_survival: float, k: np.ndarray) -> np.ndarray:
    """
    (1 - Ea)^k - (1 - Eb)^k for Ea <= Eb, stable when both survivals are tiny

    Args:
        a_survival: Ea
        b_survival: Eb
        k: nonnegative exponents
    """
    k = np.asarray(k, dtype=float)
    log_a = math.log1p(-a_survival) if a_survival < 1 else -math.inf
    if b_survival >= 1:
        b_pow = np.where(k == 0, 1.0, 0.0)
        with np.errstate(invalid="ignore"):
            a_pow = np.where(k == 0, 1.0, np.exp(k * log_a))
        return a_pow - b_pow
    log_b = math.log1p(-b_survival)
    with np.errstate(invalid="ignore"):
        return np.where(k == 0, 0.0, np.exp(k * log_a) * -np.expm1(k * (log_b - log_a)))


# ============================================================================
# Quasi-stationary measure Pi
# ============================================================================


def Pi(params: ModelParams, x: Number) -> Number:
    """Generating function of the quasi-stationary measure pi"""
    if params.is_critical:
        return 2 * (1 / _sqrt(1 - x) - 1)
    sigma = params.sigma
    s = _sqrt(1 - 4 * params.h * x)
    return (1 / sigma) * (1 - (1 - x) * ((sigma + 1) / (sigma + s)) ** 2)


def Pi_prime(params: ModelParams, x: Number) -> Number:
    if params.is_critical:
        return (1 - x) ** -1.5 if not isinstance(x, mpmath.mpf) else (1 - x) ** mpmath.mpf(-1.5)
    h, sigma = params.h, params.sigma
    s = _sqrt(1 - 4 * h * x)
    inner = -1 / (sigma + s) ** 2 + 4 * h * (1 - x) / (s * (sigma + s) ** 3)
    return -((sigma + 1) ** 2 / sigma) * inner


def log_pi_coeffs(params: ModelParams, pmax: int) -> np.ndarray:
    """
    log pi(p) for p = 0..pmax (entry 0 is -inf)

    pi(p) = ((1+sigma)^2 / (8h^2)) sum_{k>p} C(2k,k) h^k / (2k-1); at the
    critical point the tail telescopes to pi(p) = 2 C(2p,p) 4^-p.
    """
    out = np.full(pmax + 1, -np.inf)
    if pmax < 1:
        return out
    p = np.arange(1, pmax + 1, dtype=float)
    if params.is_critical:
        out[1:] = math.log(2) + _log_central_binomial(p) - p * math.log(4)
        return out
    h = params.h
    prefactor = 2 * math.log(1 + params.sigma) - math.log(8 * h * h)
    # tail terms decay like (4h)^k; sum until they are negligible
    extra = int(math.ceil(-45 / math.log(4 * h))) + 8
    if extra > 1_000_000:
        # near-critical: the full sum is -sigma, so take the complement of the head
        k = np.arange(0, pmax + 1, dtype=float)
        head = np.cumsum(np.exp(_log_central_binomial(k) + k * math.log(h)) / (2 * k - 1))
        out[1:] = prefactor + np.log(-params.sigma - head[1:])
        return out
    k = np.arange(1, pmax + extra + 2, dtype=float)
    log_terms = _log_central_binomial(k) + k * math.log(h) - np.log(2 * k - 1)
    shift = log_terms.max()
    tail = np.cumsum(np.exp(log_terms - shift)[::-1])[::-1]
    # tail[j] = sum over k >= j+1; we need sum over k > p, i.e. index p
    out[1:] = prefactor + shift + np.log(tail[1 : pmax + 1])
    return out


def pi_coeffs(params: ModelParams, pmax: int) -> np.ndarray:
    return np.exp(log_pi_coeffs(params, pmax))


def pi_coeff(params: ModelParams, p: int) -> float:
    if p < 1:
        raise ModelError(f"perimeter must be positive, got {p}")
    return float(pi_coeffs(params, p)[p])


def mean_y0(params: ModelParams) -> float:
    """E[Y(0)] for the reverse tree tau0: theta0 Pi'(theta0) / Pi(theta0)"""
    t0 = 1 - params.h
    return float(t0 * Pi_prime(params, t0) / Pi(params, t0))


def y_law(params: ModelParams, r: int, pmax: int) -> np.ndarray:
    """
    Law of Y(r), the number of vertices at reverse height r in tau0

    P(Y(r) = p) = pi(p) m^-r / Pi(theta0) (G_{r+1}^p - G_r^p), p = 0..pmax
    """
    E = height_survival(params, r + 1)
    p = np.arange(pmax + 1, dtype=float)
    log_pi = log_pi_coeffs(params, pmax)
    diff = power_difference(E[r + 1], E[r], p)
    with np.errstate(divide="ignore"):
        log_diff = np.log(np.maximum(diff, 0.0))
    out = np.exp(log_pi + log_diff - r * math.log(params.m) - math.log(Pi(params, 1 - params.h)))
    out[0] = 0.0
    return out


def spine_truncation_error(params: ModelParams, r: int, margin: int) -> float:
    """
    P(B_r(tau0) is not contained in the descendants of the spine vertex at level r + margin)

    With R = r + margin, the ball is contained iff a single tree of
    B_R(tau0) reaches depth margin, which has probability
    m^-R (G_{R+1} - G_R) Pi'(G_margin) / Pi(theta0).
    """
    if r < 0 or margin < 1:
        raise ModelError(f"need r >= 0 and margin >= 1, got r={r}, margin={margin}")
    R = r + margin
    with mpmath.workdps(40):
        zero = mpmath.mpf(0)
        step = g_iter(params, R + 1, zero) - g_iter(params, R, zero)
        theta0 = 1 - mpmath.mpf(params.h)
        inside = step * Pi_prime(params, g_iter(params, margin, zero)) / (
            mpmath.mpf(params.m) ** R * Pi(params, theta0))
        return max(float(1 - inside), 0.0)


# ============================================================================
# mu: geometric offspring law of the geodesic tree
# ============================================================================


def mu(params: ModelParams, k: int) -> float:
    """mu(k) = m (1-m)^(k-1) for k >= 1"""
    if k < 1:
        raise ModelError(f"offspring count must be at least 1, got {k}")
    m = params.m
    return m * (1 - m) ** (k - 1)


def mu_array(params: ModelParams, kmax: int) -> np.ndarray:
    k = np.arange(kmax + 1, dtype=float)
    out = params.m * (1 - params.m) ** np.maximum(k - 1, 0)
    out[0] = 0.0
    return out


# ============================================================================
# Half-plane peeling and spine laws
# ============================================================================


def peeling_probabilities(params: ModelParams, imax: int) -> tuple[float, np.ndarray]:
    """
    Case probabilities of one half-plane peeling step

    Returns:
        (P(fresh vertex), q) where q[i] = (8+1/h)^-i w(i+1) is the probability
        of each of the two cases swallowing i boundary edges, i = 0..imax
    """
    i = np.arange(imax + 1, dtype=float)
    q = np.exp(-i * math.log(params.a) + log_disk_weights(params, imax + 1)[1:])
    return params.peel_fresh, q


def lr_law(params: ModelParams, r: int, kmax: int) -> np.ndarray:
    """
    Joint law of (L_r, R_r) on the grid [0, kmax]^2

    P(L=i, R=j) = (G_r - G_{r-1}) / (G_{r+1} - G_r) theta(i+j+1) G_{r-1}^i G_r^j
    """
    if r < 1:
        raise ModelError(f"spine level must be at least 1, got {r}")
    E = height_survival(params, r + 1)
    th = theta_array(params, 2 * kmax + 1)
    i = np.arange(kmax + 1, dtype=float)
    if E[r - 1] >= 1:
        left = np.where(i == 0, 1.0, 0.0)
    else:
        left = np.exp(i * math.log1p(-E[r - 1]))
    right = np.exp(i * math.log1p(-E[r]))
    prefactor = (E[r - 1] - E[r]) / (E[r] - E[r + 1])
    idx = np.add.outer(np.arange(kmax + 1), np.arange(kmax + 1)) + 1
    return prefactor * th[idx] * np.outer(left, right)


def expected_lr(params: ModelParams, r: int) -> float:
    """E[L_r + R_r] = (G_r g'(G_r) - G_{r-1} g'(G_{r-1})) / (G_{r+1} - G_r) - 1"""
    zero = mpmath.mpf(0)
    G = [g_iter(params, k, zero) for k in (r - 1, r, r + 1)]
    num = G[1] * g_prime(params, G[1]) - G[0] * g_prime(params, G[0])
    return float(num / (G[2] - G[1]) - 1)
