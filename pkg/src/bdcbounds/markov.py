"""Symmetric first-order Markov inputs and what the deletion channel does to them.

A source with repeat probability ``gamma`` starts with a uniform bit and then
repeats its previous bit with probability ``gamma``. A generated bit flips
when its uniform is ``>= gamma``; the first bit is 1 when its uniform is ``< 0.5``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bdcbounds import _kernels
from bdcbounds.bitseq import (
    array_to_bits,
    binary_entropy,
    check_prob,
    check_seed,
    derive_seed,
    make_rng,
)
from bdcbounds.exceptions import DomainError, EstimationError

BURN_IN = 100
STREAM_INPUT = 0
STREAM_DELETION = 1


def markov_bits(u: np.ndarray, gamma: float) -> np.ndarray:
    """Turn a stream of uniforms into Markov bits (uint8 array)."""
    bits = np.empty(len(u), dtype=np.uint8)
    if len(u) == 0:
        return bits
    bits[0] = 1 if u[0] < 0.5 else 0
    parity = np.cumsum(u[1:] >= gamma, dtype=np.int64) & 1
    bits[1:] = bits[0] ^ parity.astype(np.uint8)
    return bits


def generate(n: int, gamma: float, seed: int) -> str:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    gamma = check_prob(gamma, "gamma")
    return array_to_bits(markov_bits(make_rng(seed).random(n), gamma))


def output_q(gamma: float, d: float) -> float:
    """Repeat probability of the received process."""
    gamma = check_prob(gamma, "gamma")
    d = check_prob(d, "d")
    shift = d * (1.0 - 2.0 * gamma)
    if shift == -1.0:
        return 1.0
    # same as 1 - (1 - gamma) / (1 + shift), but exact at d = 0
    return (gamma + shift) / (1.0 + shift)


def same_symbol_prob(k: int, gamma: float) -> float:
    """Probability that the bit ``k`` steps later equals the current one."""
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    gamma = check_prob(gamma, "gamma")
    return (1.0 + (2.0 * gamma - 1.0) ** k) / 2.0


def _geometric_sum(r: float, terms: int) -> float:
    """``sum_{k < terms} r**k``."""
    if r == 1.0:
        return float(terms)
    return (1.0 - r**terms) / (1.0 - r)


def first_bit_match_prob(gamma: float, d: float, n: int | float = math.inf) -> float:
    """Probability that the output is nonempty and its first bit equals the first input bit.

    ``n`` is the input length; ``math.inf`` gives the long-block limit.
    """
    gamma = check_prob(gamma, "gamma")
    d = check_prob(d, "d")
    s = 2.0 * gamma - 1.0
    if n == math.inf:
        denom = 1.0 + d * (1.0 - 2.0 * gamma)
        if denom == 0.0:
            # d = gamma = 1: limit along gamma = 1
            return 1.0
        return 1.0 - d * (1.0 - gamma) / denom
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer or inf, got {n!r}")
    # X_1 survives, or X_1..X_{k+1} are deleted and X_{k+2} survives (k < n - 1)
    terms = int(n) - 1
    tail = _geometric_sum(d, terms) + s * _geometric_sum(d * s, terms)
    return (1.0 - d) + d * (1.0 - d) / 2.0 * tail


def first_bit_mi(gamma: float, d: float) -> float:
    """Information between first sent and first received bit, read as a BSC."""
    return 1.0 - binary_entropy(1.0 - first_bit_match_prob(gamma, d))


def output_match_prob(lag: int, q: float) -> float:
    if lag < 0:
        raise DomainError(f"lag must be nonnegative, got {lag}")
    q = check_prob(q, "q")
    return (1.0 + (1.0 - 2.0 * q) ** lag) / 2.0


@dataclass(frozen=True)
class QEstimate:
    estimate: float
    std_err: float
    pairs: int
    equal: int

    def z_score(self, reference: float) -> float:
        if self.std_err == 0.0:
            return 0.0 if self.estimate == reference else math.copysign(math.inf, self.estimate - reference)
        return (self.estimate - reference) / self.std_err


def trial_seeds(seed: int, trial: int) -> tuple[int, int]:
    """Seeds of the input and deletion streams of one Monte Carlo trial."""
    return derive_seed(seed, trial, STREAM_INPUT), derive_seed(seed, trial, STREAM_DELETION)


def estimate_q(gamma: float, d: float, n: int, trials: int, seed: int,
               burn_in: int = BURN_IN) -> QEstimate:
    """Monte Carlo estimate of the output repeat probability.

    Each trial draws a Markov input from its own derived seed, deletes bits with a
    second derived seed, drops the first ``burn_in`` received bits and counts equal
    adjacent pairs. Adjacent-equality indicators of a symmetric binary Markov chain
    are i.i.d., so the binomial standard error applies to the pooled count.
    """
    gamma = check_prob(gamma, "gamma")
    d = check_prob(d, "d")
    check_seed(seed)
    if n < 1000:
        raise DomainError(f"n must be at least 1000, got {n}")
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    pairs = equal = 0
    for trial in range(trials):
        s_in, s_del = trial_seeds(seed, trial)
        u_gen = make_rng(s_in).random(n)
        u_del = make_rng(s_del).random(n)
        p, e, _ = _kernels.markov_deletion_pairs(u_gen, u_del, gamma, d, burn_in)
        pairs += p
        equal += e
    if pairs == 0:
        raise EstimationError("no adjacent output pairs survived; d is too close to 1")
    est = equal / pairs
    return QEstimate(est, math.sqrt(est * (1.0 - est) / pairs), pairs, equal)
