"""Bit-string primitives shared by the channel models.

Bit strings are plain ``str`` values over ``'0'``/``'1'``; the empty string is
the null output. Logarithms are base 2 everywhere and ``0 log 0 = 0``.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence``; uniforms are drawn with ``Generator.random`` (53-bit doubles).
A bit is deleted when its uniform is ``< d``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence

import numpy as np

from bdcbounds.exceptions import DomainError

BitString = str

INT64_MAX = 2**63 - 1
SEED_MAX = 2**64 - 1
NORMALIZATION_TOL = 1e-12


def check_bits(x: str) -> str:
    if not isinstance(x, str) or x.strip("01"):
        raise DomainError(f"not a bit string: {x!r}")
    return x


def check_prob(p: float, name: str = "probability") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def all_strings(length: int) -> list[str]:
    """All ``2**length`` bit strings of a given length in lexicographic order."""
    if length == 0:
        return [""]
    return [format(v, f"0{length}b") for v in range(1 << length)]


def subsequence_count(x: str, y: str) -> int:
    """Number of index subsets of ``x`` whose induced subsequence is ``y``.

    >>> subsequence_count("10101010", "10101")
    6
    """
    check_bits(x)
    check_bits(y)
    m = len(y)
    if m > len(x):
        return 0
    # ways[j]: embeddings of y[:j] in the prefix of x read so far
    ways = [1] + [0] * m
    for c in x:
        for j in range(m, 0, -1):
            if y[j - 1] == c:
                ways[j] += ways[j - 1]
    if ways[m] > INT64_MAX:
        raise OverflowError(f"subsequence count exceeds 64 bits for |x|={len(x)}")
    return ways[m]


def deletion_output_prob(x: str, y: str, d: float) -> float:
    """Probability that the deletion channel maps ``x`` to ``y``."""
    d = check_prob(d, "d")
    n, m = len(x), len(y)
    if m > n:
        raise DomainError(f"output length {m} exceeds input length {n}")
    e = subsequence_count(x, y)
    if e == 0:
        return 0.0
    return e * (1.0 - d) ** m * d ** (n - m)


def deletion_count_prob(n: int, k: int, d: float) -> float:
    """Probability that exactly ``k`` of ``n`` bits are deleted."""
    d = check_prob(d, "d")
    if n < 0 or not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    return math.comb(n, k) * d**k * (1.0 - d) ** (n - k)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


def derive_seed(seed: int, *keys: int) -> int:
    """Mix ``seed`` with integer keys into a new 64-bit seed.

    Uses ``SeedSequence([seed, *keys])`` and takes its first 64-bit state word,
    so subseeds do not depend on evaluation order.
    """
    ss = np.random.SeedSequence([check_seed(seed), *(int(k) for k in keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_deletion(x: str, d: float, seed: int) -> str:
    """Pass ``x`` through the deletion channel using a seeded stream."""
    check_bits(x)
    d = check_prob(d, "d")
    u = make_rng(seed).random(len(x))
    kept = np.frombuffer(x.encode("ascii"), dtype=np.uint8)[u >= d]
    return kept.tobytes().decode("ascii")


def binary_entropy(p: float) -> float:
    p = check_prob(p)
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def entropy(dist: Iterable[float] | np.ndarray) -> float:
    """Shannon entropy in bits of a probability vector."""
    p = np.asarray(dist, dtype=np.float64).ravel()
    if p.size == 0 or np.any(p < 0) or not np.all(np.isfinite(p)):
        raise DomainError("probability vector must be nonempty, finite and nonnegative")
    if abs(p.sum() - 1.0) > NORMALIZATION_TOL:
        raise DomainError(f"probability vector sums to {p.sum()!r}, not 1")
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def bits_to_array(x: str) -> np.ndarray:
    return np.frombuffer(check_bits(x).encode("ascii"), dtype=np.uint8) - ord("0")


def array_to_bits(a: Sequence[int] | np.ndarray) -> str:
    a = np.asarray(a, dtype=np.uint8)
    return (a + ord("0")).tobytes().decode("ascii")
