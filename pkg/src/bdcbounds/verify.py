"""Machine-checkable invariants of every module, run by ``bdcbounds verify``."""

from __future__ import annotations

import math
import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass

import numpy as np

from bdcbounds import baa, bounds, markov
from bdcbounds.bitseq import (
    all_strings,
    binary_entropy,
    deletion_count_prob,
    deletion_output_prob,
    make_rng,
    sample_deletion,
    subsequence_count,
)
from bdcbounds.fibdc import build_fi_matrix, build_fifo_matrix, length_block

D_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
SLACK = 1e-9


EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


class _Failure(Exception):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise _Failure(msg)


class Verifier:
    """Holds the shared f-table so the expensive Blahut-Arimoto runs happen once."""

    def __init__(self, L_max: int = 6, tol: float = 1e-10, seed: int = 0,
                 f_override: Mapping[tuple[int, int], float] | None = None,
                 mc_n: int = 100_000, mc_trials: int = 20, enum_n: int = 12):
        if L_max < 2:
            raise ValueError("L_max must be at least 2")
        self.L_max = L_max
        self.tol = tol
        self.seed = seed
        self.mc_n = mc_n
        self.mc_trials = mc_trials
        self.enum_n = enum_n
        self.table = baa.f_table(L_max, tol=tol)
        self.f = baa.f_values(self.table)
        if f_override:
            self.f.update(f_override)

    def T(self, L: int, d: float) -> float:
        return bounds.t_L(L, d, self.f)

    # -- bit sequences ---------------------------------------------------

    def check_count_totals(self):
        rng = make_rng(self.seed)
        for n in range(1, 9):
            for _ in range(4):
                x = "".join(rng.choice(["0", "1"], size=n))
                for R in range(n + 1):
                    total = sum(subsequence_count(x, y) for y in all_strings(R))
                    _require(total == math.comb(n, R), f"x={x} R={R}: {total} != C({n},{R})")

    def check_channel_normalization(self):
        rng = make_rng(self.seed + 1)
        for n in range(1, 8):
            x = "".join(rng.choice(["0", "1"], size=n))
            for d in (0.1, 0.5, 0.9):
                total = 0.0
                for R in range(n + 1):
                    block = sum(deletion_output_prob(x, y, d) for y in all_strings(R))
                    _require(abs(block - deletion_count_prob(n, n - R, d)) < 1e-12,
                             f"length marginal x={x} R={R} d={d}")
                    total += block
                _require(abs(total - 1.0) < 1e-12, f"x={x} d={d}: total {total}")

    def check_entropy_identity(self):
        f = make_rng(self.seed + 2).uniform(-20.0, 20.0, 10_000)
        worst = 0.0
        for v in f:
            s = 1.0 / (1.0 + 2.0**v)
            lhs = binary_entropy(s) - v * s
            rhs = math.log2(1.0 + 2.0**-v)
            worst = max(worst, abs(lhs - rhs))
        _require(worst <= 1e-10, f"max deviation {worst:.3g}")
        return f"max deviation {worst:.2e}"

    def check_sampling_determinism(self):
        x = "1011001110001011"
        for seed in (0, 1, 2**64 - 1):
            _require(sample_deletion(x, 0.4, seed) == sample_deletion(x, 0.4, seed), f"seed {seed}")

    # -- matrices --------------------------------------------------------

    def check_matrix_structure(self):
        for L in range(1, self.L_max + 1):
            for d in (0.0, 0.3, 1.0):
                fi = build_fi_matrix(L, d)
                _require(np.allclose(fi.entries.sum(axis=1), 1.0, rtol=0, atol=1e-12), f"FI L={L} d={d}")
                for R in range(L + 1):
                    fifo = build_fifo_matrix(L, R)
                    block = length_block(fi, R)
                    scale = deletion_count_prob(L, L - R, d)
                    _require(np.max(np.abs(block - scale * fifo.entries)) <= 1e-12,
                             f"block relation L={L} R={R} d={d}")

    def check_complement_symmetry(self):
        flip = str.maketrans("01", "10")
        for L in range(1, min(self.L_max, 5) + 1):
            fi = build_fi_matrix(L, 0.37)
            idx_in = {x: i for i, x in enumerate(fi.input_labels)}
            idx_out = {y: j for j, y in enumerate(fi.output_labels)}
            perm_in = [idx_in[x.translate(flip)] for x in fi.input_labels]
            perm_out = [idx_out[y.translate(flip)] for y in fi.output_labels]
            _require(np.array_equal(fi.entries, fi.entries[perm_in][:, perm_out]), f"L={L}")

    def check_fifo_exact(self):
        for L in range(1, min(self.L_max, 6) + 1):
            for R in range(L + 1):
                m = build_fifo_matrix(L, R)
                c = math.comb(L, R)
                for i, x in enumerate(m.input_labels):
                    for j, y in enumerate(m.output_labels):
                        _require(m.entries[i, j] == subsequence_count(x, y) / c, f"L={L} x={x} y={y}")

    # -- capacities ------------------------------------------------------

    def check_f_anchors(self):
        f = self.f
        for L in range(1, self.L_max + 1):
            _require(f[(L, 0)] == 0.0, f"f({L},0)={f[(L, 0)]}")
            _require(abs(f[(L, 1)] - 1.0) <= 1e-8, f"f({L},1)={f[(L, 1)]}")
            _require(abs(f[(L, L)] - L) <= 1e-6, f"f({L},{L})={f[(L, L)]}")
            for R in range(L + 1):
                _require(-SLACK <= f[(L, R)] <= R + SLACK, f"f({L},{R})={f[(L, R)]} outside [0, R]")

    def check_baa_monotone(self):
        for L, R in [(3, 2), (4, 2), (5, 3)]:
            res = baa.blahut_arimoto(build_fifo_matrix(L, R), tol=self.tol, record_trace=True)
            steps = np.diff(res.trace)
            _require(np.all(steps >= -baa.MONOTONE_SLACK), f"L={L} R={R}: min step {steps.min():.3g}")
        res = baa.blahut_arimoto(build_fi_matrix(3, 0.4), tol=self.tol, record_trace=True)
        _require(np.all(np.diff(res.trace) >= -baa.MONOTONE_SLACK), "FI L=3")

    def check_baa_init_independence(self):
        ch = build_fifo_matrix(4, 2)
        ref = baa.blahut_arimoto(ch, tol=self.tol).capacity
        for k in range(10):
            init = baa.random_distribution(ch.shape[0], self.seed + 100 + k)
            c = baa.blahut_arimoto(ch, tol=self.tol, init=init).capacity
            _require(abs(c - ref) <= 10 * self.tol, f"init {k}: {c} vs {ref}")

    def check_lemma1(self):
        worst = math.inf
        for L in range(2, self.L_max + 1):
            for d in D_GRID:
                cl = baa.c_L(L, d, tol=self.tol)
                rhs = sum(deletion_count_prob(L, i, d) * self.f[(L, L - i)] for i in range(L + 1))
                _require(cl <= rhs + SLACK, f"L={L} d={d}: C_L={cl:.12g} > {rhs:.12g}")
                worst = min(worst, rhs - cl)
        return f"min gap {worst:.3g}"

    def check_f_recursion(self):
        f = self.f
        worst = math.inf
        for L in range(1, self.L_max):
            for i in range(L + 2):
                a = i / (L + 1)
                rhs = a * f.get((L, L - i + 1), 0.0) + (1 - a) * (1 + f.get((L, L - i), 0.0))
                slack = rhs - f[(L + 1, L + 1 - i)]
                _require(slack >= -SLACK, f"L={L} i={i}: slack {slack:.3g}")
                worst = min(worst, slack)
        return f"min slack {worst:.3g}"

    def check_tl_monotone(self):
        for d in D_GRID:
            ts = [self.T(L, d) for L in range(1, self.L_max + 1)]
            for L, (a, b) in enumerate(zip(ts, ts[1:]), start=1):
                _require(b <= a + SLACK, f"d={d}: T_{L + 1}={b:.12g} > T_{L}={a:.12g}")

    def check_lemma2(self):
        for d in D_GRID:
            for L in range(1, self.L_max):
                lhs = (L + 1) * self.T(L + 1, d)
                rhs = L * self.T(L, d) + 1.0 - d
                _require(lhs <= rhs + SLACK, f"L={L} d={d}: {lhs:.12g} > {rhs:.12g}")

    # -- closed forms ----------------------------------------------------

    def check_two_bit(self):
        for k in range(1, 20):
            d = 0.05 * k
            _require(abs(bounds.theorem1_bound(d) - bounds.c2bit_closed_form(d) / 2) <= 1e-15,
                     f"half-capacity identity at d={d}")
            res = baa.blahut_arimoto(build_fi_matrix(2, d), tol=self.tol)
            _require(abs(res.capacity - bounds.c2bit_closed_form(d)) <= 1e-6, f"BAA vs closed form at d={d}")
            p = bounds.optimal_2bit_dist(d)
            ratio = 2.0 ** (2 * d / (1 - d))
            _require(math.isclose(p.p0, ratio * p.p1, rel_tol=1e-12), f"ratio at d={d}")
            _require(np.max(np.abs(res.distribution - np.array(p.as_tuple()))) <= 1e-4,
                     f"optimal distribution at d={d}")

    def check_markov_bounds(self):
        ds = np.linspace(0.0, 1.0, 41)
        for d in ds:
            for g in np.linspace(0.5, 1.0, 21):
                v = bounds.theorem2_bound(d, g)
                _require(v <= 1.0 - d + 1e-15, f"d={d} gamma={g}")
                p = bounds.flip_probability(d, g)
                _require(abs(v - bounds.cascade_bsc_bec(p, d)) <= 1e-12, f"cascade d={d} gamma={g}")
                _require(abs(v - (1 - d) * markov.first_bit_mi(g, d)) <= 1e-12, f"first-bit d={d} gamma={g}")
            _require(abs(bounds.c4_bound(d) - bounds.c4_direct(d)) <= 1e-12, f"c4 forms at d={d}")
        c4 = [bounds.c4_bound(d) for d in np.linspace(0.0, 1.0, 1001)]
        _require(all(b < a for a, b in zip(c4, c4[1:])), "c4 not strictly decreasing")

    def check_bound_families(self):
        worst = math.inf
        for d in D_GRID:
            dg, dm = bounds.dg_lower_bound(d), bounds.dm_lower_bound(d)
            _require(dm >= dg - 1e-7, f"d={d}: dm {dm} < dg {dg}")
            uppers = [self.T(L, d) for L in range(1, self.L_max + 1)]
            uppers += [bounds.theorem1_bound(d), bounds.c4_bound(d), 1.0 - d]
            gap = min(uppers) - max(dg, dm)
            _require(gap >= -1e-6, f"d={d}: lower {max(dg, dm):.6g} above upper {min(uppers):.6g}")
            worst = min(worst, gap)
        return f"min gap {worst:.3g}"

    # -- Markov process --------------------------------------------------

    def check_first_bit_enumeration(self):
        for n in range(1, self.enum_n + 1):
            for g in (0.3, 0.5, 0.8):
                for d in (0.2, 0.5):
                    exact = first_bit_enumerated(g, d, n)
                    got = markov.first_bit_match_prob(g, d, n)
                    _require(abs(exact - got) <= 1e-10, f"n={n} gamma={g} d={d}: {got} vs {exact}")

    def check_first_bit_tail(self):
        for n in (10, 20, 40):
            for d in (0.1, 0.5, 0.9):
                for g in (0.2, 0.5, 0.9):
                    gap = abs(markov.first_bit_match_prob(g, d, n) - markov.first_bit_match_prob(g, d))
                    # round-off allowance: the tail itself can be far below one ulp
                    _require(gap <= 2 * d**n / (1 - d) + 4 * EPS, f"n={n} d={d} gamma={g}: gap {gap:.3g}")
        for g in np.linspace(0, 1, 11):
            _require(markov.output_q(g, 0.0) == g, f"output_q({g}, 0)")

    def check_output_process(self):
        worst = 0.0
        grid = [round(0.1 * k, 1) for k in range(1, 10)]
        for i, g in enumerate(grid):
            for j, d in enumerate(grid):
                est = markov.estimate_q(g, d, self.mc_n, self.mc_trials, self.seed + 9 * i + j)
                z = est.z_score(markov.output_q(g, d))
                _require(abs(z) <= 4, f"gamma={g} d={d}: z={z:.2f}")
                worst = max(worst, abs(z))
        return f"max |z| {worst:.2f}"

    def checks(self) -> list[tuple[str, Callable]]:
        return [
            ("subsequence counts sum to C(n,R)", self.check_count_totals),
            ("channel normalization and length marginals", self.check_channel_normalization),
            ("entropy identity", self.check_entropy_identity),
            ("deletion sampling determinism", self.check_sampling_determinism),
            ("matrices stochastic, FI blocks = p(L,i) x FIFO", self.check_matrix_structure),
            ("bit-flip symmetry", self.check_complement_symmetry),
            ("FIFO entries exact vs integer DP", self.check_fifo_exact),
            ("f anchors and 0 <= f(L,R) <= R", self.check_f_anchors),
            ("BAA lower bracket nondecreasing", self.check_baa_monotone),
            ("BAA initialization independence", self.check_baa_init_independence),
            ("lemma 1: C_L <= sum p(L,i) f(L,L-i)", self.check_lemma1),
            ("f-value recursion inequality", self.check_f_recursion),
            ("T_L nonincreasing in L", self.check_tl_monotone),
            ("lemma 2: (L+1)T_{L+1} <= L T_L + 1 - d", self.check_lemma2),
            ("2-bit closed form, BAA and optimal law", self.check_two_bit),
            ("Markov-input bound identities", self.check_markov_bounds),
            ("lower bounds stay below upper bounds", self.check_bound_families),
            ("first-bit match vs enumeration", self.check_first_bit_enumeration),
            ("first-bit tail bound, output_q(gamma,0)", self.check_first_bit_tail),
            ("output repeat probability by Monte Carlo", self.check_output_process),
        ]

    def run(self) -> list[Check]:
        results = []
        for name, fn in self.checks():
            start = time.perf_counter()
            try:
                detail = fn() or ""
                ok = True
            except _Failure as exc:
                detail, ok = str(exc), False
            results.append(Check(name, ok, detail, time.perf_counter() - start))
        return results


def first_bit_enumerated(gamma: float, d: float, n: int) -> float:
    """Exhaustive probability that the output is nonempty and starts with the first input bit.

    Sums over all ``2**n`` inputs (Markov weights) and all ``2**n`` deletion patterns.
    """
    codes = np.arange(1 << n)
    bits = (codes[:, None] >> np.arange(n - 1, -1, -1)) & 1
    same = bits[:, 1:] == bits[:, :-1]
    p_input = 0.5 * np.prod(np.where(same, gamma, 1.0 - gamma), axis=1)
    kept = bits.astype(bool)  # reuse the enumeration: bit set = position kept
    n_kept = kept.sum(axis=1)
    p_pattern = (1.0 - d) ** n_kept * d ** (n - n_kept)
    nonempty = n_kept > 0
    first = np.argmax(kept[nonempty], axis=1)
    match = bits[:, first] == bits[:, :1]
    return float(p_input @ match @ p_pattern[nonempty])


def format_report(results: list[Check]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'status':6}  {'check':{width}}  {'time':>7}  detail"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status:6}  {r.name:{width}}  {r.seconds:6.2f}s  {r.detail}")
    failed = [r.name for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        lines.append("failed: " + "; ".join(failed))
    return "\n".join(lines)
