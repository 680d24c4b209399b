"""Blahut-Arimoto capacity computation and the finite-block capacities built on it."""

from __future__ import annotations

import csv
import io
import math
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from bdcbounds.bitseq import NORMALIZATION_TOL, make_rng
from bdcbounds.exceptions import DomainError
from bdcbounds.fibdc import (
    MAX_FI_L,
    MAX_FIFO_L,
    ROW_SUM_TOL,
    ChannelMatrix,
    build_fi_matrix,
    build_fifo_matrix,
)

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100_000
LN2 = math.log(2.0)
# float slack allowed when asserting the lower bracket never decreases
MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class BaaResult:
    capacity: float
    distribution: np.ndarray
    iterations: int
    converged: bool
    gap_bound: float
    upper: float
    trace: tuple[float, ...] = ()


def _entries(ch) -> np.ndarray:
    w = ch.entries if isinstance(ch, ChannelMatrix) else np.asarray(ch, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] == 0 or w.shape[1] == 0:
        raise DomainError(f"channel matrix must be a nonempty 2-D array, got shape {w.shape}")
    return w


def _check_stochastic(w: np.ndarray) -> None:
    if np.any(w < 0) or np.any(w > 1) or not np.all(np.isfinite(w)):
        raise DomainError("channel entries must be probabilities")
    worst = np.max(np.abs(w.sum(axis=1) - 1.0))
    if worst > ROW_SUM_TOL:
        raise DomainError(f"channel rows must sum to 1 (worst deviation {worst:.3g})")


def _check_distribution(p, n: int) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64).ravel()
    if p.shape != (n,):
        raise DomainError(f"distribution has {p.size} entries, channel has {n} inputs")
    if np.any(p < 0) or abs(p.sum() - 1.0) > NORMALIZATION_TOL:
        raise DomainError("input distribution must be nonnegative and sum to 1")
    return p


def mutual_information(p, ch) -> float:
    """I(X;Y) in bits: output entropy minus the row entropies averaged under ``p``."""
    w = _entries(ch)
    p = _check_distribution(p, w.shape[0])
    return max(0.0, _plogp(p @ w) - float(p @ np.array([_plogp(row) for row in w])))


def _plogp(v: np.ndarray) -> float:
    nz = v[v > 0]
    return float(-(nz * np.log2(nz)).sum())


def _divergences(w: np.ndarray, w_log_w: np.ndarray, q: np.ndarray) -> np.ndarray:
    """KL divergence (nats) of every row from the output distribution ``q``."""
    with np.errstate(divide="ignore"):
        log_q = np.log(q)
    support = w > 0
    # a row that reaches an output of zero total probability has infinite divergence
    unreachable = np.any(support & (q == 0), axis=1)
    cross = np.where(support, w, 0.0) @ np.where(q > 0, log_q, 0.0)
    dvg = w_log_w - cross
    dvg[unreachable] = np.inf
    return dvg


def blahut_arimoto(
    ch,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    init=None,
    record_trace: bool = False,
) -> BaaResult:
    """Capacity of a discrete memoryless channel by alternating maximization.

    Stops once the certified bracket ``max_i D_i - log sum_i p_i exp(D_i)`` is at
    most ``tol`` bits, where ``D_i`` is the divergence of row ``i`` from the
    current output distribution. ``capacity`` is the lower end of the bracket.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    w = _entries(ch)
    _check_stochastic(w)
    n = w.shape[0]
    p = np.full(n, 1.0 / n) if init is None else _check_distribution(init, n).copy()
    with np.errstate(divide="ignore", invalid="ignore"):
        w_log_w = np.where(w > 0, w * np.log(np.where(w > 0, w, 1.0)), 0.0).sum(axis=1)

    trace = []
    lower = upper = 0.0
    prev_lower = -np.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        dvg = _divergences(w, w_log_w, p @ w)
        # infinite rows carry zero mass; they only push the upper end to inf
        finite = np.isfinite(dvg)
        top = float(np.max(dvg[finite]))
        scaled = np.where(finite, p * np.exp(np.where(finite, dvg, top) - top), 0.0)
        total = scaled.sum()
        lower = (top + math.log(total)) / LN2
        upper = float(np.max(dvg)) / LN2
        if lower < prev_lower - MONOTONE_SLACK:
            raise AssertionError(
                f"lower capacity bracket decreased at iteration {it}: {prev_lower!r} -> {lower!r}"
            )
        prev_lower = lower
        if record_trace:
            trace.append(lower)
        p = scaled / total
        if upper - lower <= tol:
            converged = True
            break

    capacity = max(0.0, lower)
    return BaaResult(
        capacity=capacity,
        distribution=p,
        iterations=it,
        converged=converged,
        gap_bound=max(0.0, upper - lower),
        upper=upper,
        trace=tuple(trace),
    )


_memo: dict[tuple[int, int, float], BaaResult] = {}
_memo_lock = threading.Lock()


def f_result(L: int, R: int, tol: float = DEFAULT_TOL, max_L: int = MAX_FIFO_L) -> BaaResult:
    """Memoized Blahut-Arimoto run on the fixed-input, fixed-output matrix."""
    key = (int(L), int(R), float(tol))
    with _memo_lock:
        hit = _memo.get(key)
    if hit is not None:
        return hit
    res = blahut_arimoto(build_fifo_matrix(L, R, max_L=max_L), tol=tol)
    with _memo_lock:
        _memo.setdefault(key, res)
    return res


def f_value(L: int, R: int, tol: float = DEFAULT_TOL) -> float:
    """Maximum mutual information when ``L`` bits are sent and ``R`` survive."""
    return f_result(L, R, tol).capacity


def clear_cache() -> None:
    with _memo_lock:
        _memo.clear()


def c_L(L: int, d: float, tol: float = DEFAULT_TOL, max_L: int = MAX_FI_L) -> float:
    """Capacity of the ``L``-bit block channel with all output lengths kept."""
    return blahut_arimoto(build_fi_matrix(L, d, max_L=max_L), tol=tol).capacity


def _f_job(args):
    L, R, tol = args
    return (L, R), f_result(L, R, tol)


def f_table(L_max: int, tol: float = DEFAULT_TOL, jobs: int = 1, L_min: int = 1) -> dict:
    """``{(L, R): BaaResult}`` for ``L_min <= L <= L_max`` and ``0 <= R <= L``."""
    keys = [(L, R, tol) for L in range(L_min, L_max + 1) for R in range(L + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_f_job, keys))
        with _memo_lock:
            for (L, R), res in results:
                _memo.setdefault((L, R, float(tol)), res)
    else:
        results = [_f_job(k) for k in keys]
    return dict(results)


def f_values(table: dict) -> dict[tuple[int, int], float]:
    return {k: v.capacity for k, v in table.items()}


def f_table_csv(table: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["L", "R", "f", "iterations", "gap_bound"])
    for (L, R), res in sorted(table.items()):
        writer.writerow([L, R, format(res.capacity, ".17g"), res.iterations, format(res.gap_bound, ".6g")])
    return buf.getvalue()


def random_distribution(n: int, seed: int) -> np.ndarray:
    """Dirichlet(1,...,1) point from the package's seeded generator."""
    p = make_rng(seed).dirichlet(np.ones(n))
    return p / p.sum()
