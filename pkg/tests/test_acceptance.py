"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line; the lines are printed at the end of the
pytest run (see conftest.py) and when this file is run as a script.
"""

import math
import time

import numpy as np
import pytest

from bdcbounds import baa, bounds, cli, curves, markov
from bdcbounds.bitseq import binary_entropy, deletion_count_prob, make_rng, subsequence_count
from bdcbounds.fibdc import build_fi_matrix
from bdcbounds.verify import Verifier, first_bit_enumerated

D_GRID = [round(0.1 * k, 1) for k in range(1, 10)]
RESULTS: dict[int, tuple[bool, str]] = {}


def record(number, ok, detail):
    RESULTS[number] = (bool(ok), detail)
    assert ok, f"criterion {number}: {detail}"


@pytest.fixture(scope="module")
def fvals():
    start = time.perf_counter()
    f = baa.f_values(baa.f_table(6, tol=1e-10))
    return f, time.perf_counter() - start


def test_01_subsequence_counts():
    start = time.perf_counter()
    a = subsequence_count("10101010", "10011")
    b = subsequence_count("10101010", "10101")
    elapsed = time.perf_counter() - start
    record(1, a == 1 and b == 6 and elapsed < 1e-3, f"E=({a}, {b}), {elapsed * 1e3:.3f} ms")


def test_02_one_bit_block_is_erasure():
    start = time.perf_counter()
    worst = max(abs(baa.blahut_arimoto(build_fi_matrix(1, k / 10), tol=1e-9).capacity - (1 - k / 10))
                for k in range(11))
    elapsed = time.perf_counter() - start
    record(2, worst <= 1e-6 and elapsed < 1.0, f"max |C - (1-d)| = {worst:.2e}, {elapsed:.2f} s")


def test_03_two_bit_closed_form():
    start = time.perf_counter()
    cap_err = dist_err = 0.0
    for k in range(1, 20):
        d = k / 20
        res = baa.blahut_arimoto(build_fi_matrix(2, d), tol=1e-12)
        cap_err = max(cap_err, abs(res.capacity - bounds.c2bit_closed_form(d)))
        dist_err = max(dist_err, float(np.max(np.abs(res.distribution - bounds.optimal_2bit_dist(d).as_tuple()))))
    elapsed = time.perf_counter() - start
    record(3, cap_err <= 1e-6 and dist_err <= 1e-4 and elapsed < 10,
           f"capacity err {cap_err:.2e}, distribution err {dist_err:.2e}, {elapsed:.2f} s")


def test_04_f_anchors(fvals):
    f, elapsed = fvals
    bad = []
    for L in range(1, 7):
        if f[(L, 0)] != 0.0:
            bad.append(f"f({L},0)")
        if abs(f[(L, 1)] - 1) > 1e-8:
            bad.append(f"f({L},1)")
        if abs(f[(L, L)] - L) > 1e-6:
            bad.append(f"f({L},{L})")
        bad += [f"range f({L},{R})" for R in range(L + 1) if not 0.0 <= f[(L, R)] <= R]
    record(4, not bad and elapsed < 300, f"{', '.join(bad) or 'all anchors hold'}, table {elapsed:.1f} s")


def test_05_lemma1(fvals):
    f, _ = fvals
    worst = math.inf
    for L in range(2, 7):
        for d in D_GRID:
            rhs = sum(deletion_count_prob(L, i, d) * f[(L, L - i)] for i in range(L + 1))
            worst = min(worst, rhs + 1e-9 - baa.c_L(L, d, tol=1e-10))
    record(5, worst >= 0, f"min slack {worst:.3e}")


def test_06_lemma2_and_f_recursion(fvals):
    f, _ = fvals
    worst = math.inf
    for d in D_GRID:
        T = {L: bounds.t_L(L, d, f) for L in range(1, 7)}
        for L in range(1, 6):
            worst = min(worst, L * T[L] + (1 - d) + 1e-9 - (L + 1) * T[L + 1])
    f7 = baa.f_values(baa.f_table(7, tol=1e-10))
    rec = min(
        i / (L + 1) * f7[(L, L - i + 1)] + (1 - i / (L + 1)) * (1 + f7[(L, L - i)]) - f7[(L + 1, L + 1 - i)]
        for L in range(1, 7) for i in range(1, L + 1)
    )
    record(6, worst >= 0 and rec >= -1e-9, f"lemma-2 slack {worst:.3e}, f recursion slack {rec:.3e}")


def test_07_T_L_monotone(fvals):
    f, _ = fvals
    worst = max(bounds.t_L(L + 1, d, f) - bounds.t_L(L, d, f) for d in D_GRID for L in range(1, 6))
    record(7, worst <= 1e-9, f"max increase {worst:.3e}")


def test_08_output_process_monte_carlo():
    start = time.perf_counter()
    worst = 0.0
    for i, g in enumerate(D_GRID):
        for j, d in enumerate(D_GRID):
            est = markov.estimate_q(g, d, 100_000, 20, seed=1000 + 9 * i + j)
            worst = max(worst, abs(est.z_score(markov.output_q(g, d))))
    elapsed = time.perf_counter() - start
    record(8, worst <= 4 and elapsed < 120, f"max |z| {worst:.2f} over 81 points, {elapsed:.1f} s")


def test_09_first_bit_enumeration():
    worst = max(abs(markov.first_bit_match_prob(g, d, n) - first_bit_enumerated(g, d, n))
                for n in range(1, 13) for g in (0.3, 0.5, 0.8) for d in (0.2, 0.5))
    record(9, worst <= 1e-10, f"max deviation {worst:.2e}")


def test_10_figure_curves(tmp_path):
    out = tmp_path / "fig4.csv"
    code = cli.main(["bounds", "--bounds", "c1,c2,c3,c4,tl,erasure", "--d-step", "0.01",
                     "--L-max", "6", "--tol", "1e-10", "--out", str(out)])
    _, col = curves.read_curves_csv(out.read_text())
    d = np.array(col["d"])
    c = {k: np.array(col[k]) for k in ("c1", "c2", "c3", "c4", "t6", "erasure")}
    inner = (d > 0) & (d < 1)
    below = c["c4"] < c["t6"]
    run = max((len(s) for s in "".join("1" if b else "0" for b in below).split("0")), default=0)
    c3_gap = float(np.max(np.abs(c["c3"] - c["erasure"])[d <= 0.5]))
    parts = {
        "C1(0)=C4(0)=1": c["c1"][0] == 1 and c["c4"][0] == 1,
        "C curves vanish at d=1": all(c[k][-1] == 0 for k in ("c1", "c2", "c3", "c4")),
        "C1 < 1-d inside (0,1)": bool(np.all(c["c1"][inner] < 1 - d[inner])),
        f"C3 within 0.02 of 1-d for d<=0.5 (max gap {c3_gap:.4f})": c3_gap <= 0.02,
        f"C4 < T6 on an interval ({run} consecutive grid points)": run >= 2,
    }
    failed = [k for k, ok in parts.items() if not ok]
    record(10, code == 0 and not failed, "failed: " + "; ".join(failed) if failed else "; ".join(parts))


def test_11_entropy_identity():
    f = make_rng(11).uniform(-20.0, 20.0, 10_000)
    s = 1.0 / (1.0 + 2.0**f)
    worst = max(abs(binary_entropy(si) - fi * si - math.log2(1.0 + 2.0**-fi)) for fi, si in zip(f, s))
    record(11, worst <= 1e-10, f"max deviation {worst:.2e}")


def test_12_bounds_deterministic(tmp_path):
    args = ["bounds", "--bounds", "c1,c2,c3,c4,tl", "--d-step", "0.01", "--L-max", "6"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    codes = cli.main(args + ["--out", str(a)]), cli.main(args + ["--out", str(b)])
    record(12, codes == (0, 0) and a.read_bytes() == b.read_bytes(), f"exit codes {codes}, {a.stat().st_size} bytes")


@pytest.mark.slow
def test_13_full_verify_wall_time():
    start = time.perf_counter()
    baa.clear_cache()
    results = Verifier(L_max=6).run()
    elapsed = time.perf_counter() - start
    failed = [r.name for r in results if not r.passed]
    record(13, not failed and elapsed < 600,
           f"verify L_max=6: {len(results) - len(failed)}/{len(results)} checks, {elapsed:.1f} s")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
