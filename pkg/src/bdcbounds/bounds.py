"""Closed-form capacity bounds for the binary deletion channel.

Every function takes the deletion probability ``d`` and returns bits per
channel use. Removable singularities at ``d = 1`` are handled by explicit
branches rather than by evaluating divergent exponents.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass

import numpy as np

from bdcbounds.bitseq import binary_entropy, check_prob, deletion_count_prob
from bdcbounds.exceptions import DomainError

LOG2E = math.log2(math.e)
RAHMATI_DUMAN_SLOPE = 0.4143
RAHMATI_DUMAN_MIN_D = 0.65
ONE_MINUS_H_MAX_D = 0.5
SUM_TOL = 1e-12


def _exponent(d: float) -> float:
    """The recurring exponent ``2d / (1 - d)`` for ``d < 1``."""
    return 2.0 * d / (1.0 - d)


# ---------------------------------------------------------------------------
# finite-block bound and its recursion


def t_L(L: int, d: float, f: Mapping[tuple[int, int], float]) -> float:
    """Length-normalized, deletion-weighted sum of the f-values of block length ``L``."""
    d = check_prob(d, "d")
    total = 0.0
    for i in range(L + 1):
        key = (L, L - i)
        if key not in f:
            raise DomainError(f"missing f-value for (L, R) = {key}")
        total += deletion_count_prob(L, i, d) * f[key]
    return total / L


def lemma2_extend(t_value: float, L: int, d: float, steps: int) -> list[float]:
    """Push a block-length-``L`` bound forward with ``U_{k+1} = (k U_k + 1 - d) / (k + 1)``.

    Returns ``[U_{L+1}, ..., U_{L+steps}]``.
    """
    d = check_prob(d, "d")
    if L < 1 or steps < 0:
        raise DomainError(f"need L >= 1 and steps >= 0, got L={L}, steps={steps}")
    out = []
    u = float(t_value)
    for k in range(L, L + steps):
        u = (k * u + 1.0 - d) / (k + 1)
        out.append(u)
    return out


# ---------------------------------------------------------------------------
# two-bit block bound


@dataclass(frozen=True)
class TwoBitDistribution:
    """Input law of a 2-bit block over ``00, 01, 10, 11``."""

    p0: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        if min(self.as_tuple()) < 0:
            raise DomainError("probabilities must be nonnegative")
        if abs(sum(self.as_tuple()) - 1.0) > SUM_TOL:
            raise DomainError("probabilities must sum to 1")
        if abs(self.p0 - self.p3) > SUM_TOL or abs(self.p1 - self.p2) > SUM_TOL:
            raise DomainError("distribution must be complement-symmetric")
        if abs(self.p0 + self.p1 - 0.5) > SUM_TOL:
            raise DomainError("p0 + p1 must equal 1/2")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p0, self.p1, self.p2, self.p3)


def c2bit_closed_form(d: float) -> float:
    """Capacity of the 2-bit block deletion channel (all output lengths kept)."""
    d = check_prob(d, "d")
    if d == 1.0:
        return 0.0
    x = _exponent(d)
    return (1.0 - d) ** 2 * (1.0 + math.log1p(2.0**-x) / math.log(2.0)) + 2.0 * d * (1.0 - d)


def gamma_star(d: float) -> float:
    """Repeat probability of the Markov input matching the optimal 2-bit law."""
    d = check_prob(d, "d")
    if d == 1.0:
        return 1.0
    return 1.0 / (1.0 + 2.0 ** -_exponent(d))


def optimal_2bit_dist(d: float) -> TwoBitDistribution:
    d = check_prob(d, "d")
    if d == 1.0:
        return TwoBitDistribution(0.5, 0.0, 0.0, 0.5)
    g = gamma_star(d)
    p1 = 0.5 * (2.0 ** -_exponent(d)) * g
    p0 = 0.5 - p1
    return TwoBitDistribution(p0, p1, p1, p0)


def theorem1_bound(d: float) -> float:
    """Half the 2-bit block capacity."""
    d = check_prob(d, "d")
    if d == 1.0:
        return 0.0
    x = _exponent(d)
    return 0.5 * (1.0 - d) ** 2 * (1.0 + math.log1p(2.0**-x) / math.log(2.0)) + d * (1.0 - d)


# ---------------------------------------------------------------------------
# first-bit (Markov input) bound


def flip_probability(d: float, gamma: float) -> float:
    """Probability that the first received bit differs from the first sent bit."""
    d = check_prob(d, "d")
    gamma = check_prob(gamma, "gamma")
    denom = 1.0 + d * (1.0 - 2.0 * gamma)
    if denom == 0.0:
        # only at d = gamma = 1, where no bit survives
        return 0.0
    return d * (1.0 - gamma) / denom


def theorem2_bound(d: float, gamma: float) -> float:
    d = check_prob(d, "d")
    gamma = check_prob(gamma, "gamma")
    if gamma == 0.0:
        raise DomainError("gamma must be positive")
    if d == 1.0:
        return 0.0
    arg = flip_probability(d, gamma)
    if not 0.0 <= arg <= 1.0:
        raise DomainError(f"entropy argument {arg!r} outside [0, 1]")
    return (1.0 - d) * (1.0 - binary_entropy(arg))


def linear_gamma(d: float) -> float:
    return (1.0 + check_prob(d, "d")) / 2.0


def c4_bound(d: float) -> float:
    """Markov-input bound with the repeat probability growing linearly in ``d``."""
    return theorem2_bound(d, linear_gamma(d))


def c4_direct(d: float) -> float:
    """Same bound written with the simplified entropy argument ``d / (2 (1 + d))``."""
    d = check_prob(d, "d")
    return (1.0 - d) * (1.0 - binary_entropy(d / (2.0 * (1.0 + d))))


def cascade_bsc_bec(p: float, e: float) -> float:
    """Capacity of a BSC with crossover ``p`` followed by a BEC with erasure ``e``."""
    p = check_prob(p, "p")
    e = check_prob(e, "e")
    return (1.0 - e) * (1.0 - binary_entropy(p))


# ---------------------------------------------------------------------------
# quoted reference curves


def reference_bounds(d: float) -> dict[str, float | None]:
    """Reference curves at ``d``; ``None`` marks a curve outside its stated range."""
    d = check_prob(d, "d")
    return {
        "erasure": 1.0 - d,
        "rahmati_duman": RAHMATI_DUMAN_SLOPE * (1.0 - d) if d >= RAHMATI_DUMAN_MIN_D else None,
        "one_minus_h": 1.0 - binary_entropy(d) if d < ONE_MINUS_H_MAX_D else None,
    }


# ---------------------------------------------------------------------------
# Markov-input lower bounds, maximized numerically

T_GRID = (1e-4, 10.0, 64)
GAMMA_GRID = (0.01, 0.99, 99)
OBJECTIVE_TOL = 1e-7
GOLDEN_XTOL = 1e-10
MAX_PASSES = 500
GAMMA_EPS = 1e-12
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def output_repeat_prob(gamma, d):
    """Repeat probability of the received process (vectorized over ``gamma``)."""
    g = np.asarray(gamma, dtype=np.float64)
    shift = d * (1.0 - 2.0 * g)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(shift == -1.0, 1.0, (g + shift) / (1.0 + shift))


def _ab_terms(t, gamma):
    e = np.exp(-np.asarray(t, dtype=np.float64))
    g = np.asarray(gamma, dtype=np.float64)
    denom = 1.0 - g * e
    a = (1.0 - g) * e / denom
    b = (1.0 - g) ** 2 * e * e / denom + g * e
    return a, b


def dg_objective(t, gamma, d):
    a, b = _ab_terms(t, gamma)
    q = output_repeat_prob(gamma, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = -np.asarray(t) * LOG2E - (1.0 - d) * np.log2((1.0 - q) * a + q * b)
    return np.where(np.isfinite(val), val, -np.inf)


def dm_objective(t, gamma, d):
    a, b = _ab_terms(t, gamma)
    q = output_repeat_prob(gamma, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = -np.asarray(t) * LOG2E - (1.0 - d) * ((1.0 - q) * np.log2(a) + q * np.log2(b))
    return np.where(np.isfinite(val), val, -np.inf)


def golden_max(func: Callable[[float], float], lo: float, hi: float, xtol: float = GOLDEN_XTOL):
    """Golden-section search for the maximum of ``func`` on ``[lo, hi]``.

    Returns ``(x, func(x))`` for the best point probed.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    e = a + INV_PHI * (b - a)
    fc, fe = func(c), func(e)
    while b - a > xtol:
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, e, fe
            e = a + INV_PHI * (b - a)
            fe = func(e)
    return (c, fc) if fc >= fe else (e, fe)


def maximize_objective(objective, d: float, t_grid=T_GRID, gamma_grid=GAMMA_GRID,
                       tol: float = OBJECTIVE_TOL) -> tuple[float, float, float]:
    """Grid search then coordinate-wise golden refinement.

    ``t`` is searched in log scale. Returns ``(value, t, gamma)``.
    """
    ts = np.logspace(math.log10(t_grid[0]), math.log10(t_grid[1]), t_grid[2])
    gs = np.linspace(*gamma_grid)
    vals = objective(ts[:, None], gs[None, :], d)
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    log_t, g, best = math.log(ts[i]), float(gs[j]), float(vals[i, j])
    dlog = math.log(ts[1] / ts[0])
    dg = float(gs[1] - gs[0])

    def f_t(x):
        return float(objective(math.exp(x), g, d))

    def f_g(y):
        return float(objective(math.exp(log_t), y, d))

    for _ in range(MAX_PASSES):
        start = best
        x, fx = golden_max(f_t, log_t - dlog, log_t + dlog)
        if fx > best:
            log_t, best = x, fx
        y, fy = golden_max(f_g, max(GAMMA_EPS, g - dg), min(1.0 - GAMMA_EPS, g + dg))
        if fy > best:
            g, best = y, fy
        if best - start < tol:
            break
    return best, math.exp(log_t), g


def dg_lower_bound(d: float) -> float:
    """Markov-input lower bound with the mixture form inside the logarithm."""
    d = check_prob(d, "d")
    if d == 1.0:
        return 0.0
    return max(0.0, maximize_objective(dg_objective, d)[0])


def dm_lower_bound(d: float) -> float:
    """Geometric block-length variant of :func:`dg_lower_bound`."""
    d = check_prob(d, "d")
    if d == 1.0:
        return 0.0
    return max(0.0, maximize_objective(dm_objective, d)[0])
