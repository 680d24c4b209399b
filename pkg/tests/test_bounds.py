import json
import math
from pathlib import Path

import numpy as np
import pytest
from scipy import optimize

from bdcbounds import baa, bounds
from bdcbounds.bitseq import binary_entropy, deletion_count_prob
from bdcbounds.exceptions import DomainError

GOLDEN = json.loads((Path(__file__).parent / "golden" / "values.json").read_text())
D_GRID = [round(0.1 * k, 1) for k in range(1, 10)]


def test_t_L_examples(f6):
    for d in (0.0, 0.2, 0.75, 1.0):
        assert bounds.t_L(1, d, f6) == pytest.approx(1 - d, abs=1e-9)
    for L in range(1, 7):
        assert bounds.t_L(L, 0.0, f6) == pytest.approx(1.0, abs=1e-7)
    anchors = {(2, 0): 0.0, (2, 1): 1.0, (2, 2): 2.0}
    assert bounds.t_L(2, 0.5, anchors) == pytest.approx(0.5, abs=1e-15)
    assert bounds.t_L(2, 0.5, f6) == pytest.approx(0.5, abs=1e-8)
    with pytest.raises(DomainError):
        bounds.t_L(3, 0.5, anchors)


@pytest.mark.parametrize("d", D_GRID)
def test_T_L_nonincreasing_and_lemma2(f6, d):
    T = [bounds.t_L(L, d, f6) for L in range(1, 7)]
    for L in range(1, 6):
        assert T[L] <= T[L - 1] + 1e-9
        assert (L + 1) * T[L] <= L * T[L - 1] + (1 - d) + 1e-9


def test_lemma2_extend():
    for d in (0.1, 0.6):
        assert bounds.lemma2_extend(1 - d, 1, d, 3) == pytest.approx([1 - d] * 3)
    assert bounds.lemma2_extend(0.4, 5, 0.5, 0) == []
    assert bounds.lemma2_extend(0.4, 5, 0.5, 2) == pytest.approx([(5 * 0.4 + 0.5) / 6,
                                                                  (6 * (5 * 0.4 + 0.5) / 6 + 0.5) / 7])


def test_lemma2_extension_dominates_direct_T7():
    d = 0.5
    f = baa.f_values(baa.f_table(7, tol=1e-10))
    u7 = bounds.lemma2_extend(bounds.t_L(6, d, f), 6, d, 1)[0]
    assert bounds.t_L(7, d, f) <= u7 + 1e-9


def test_c2bit():
    assert bounds.c2bit_closed_form(0.0) == 2.0
    assert bounds.c2bit_closed_form(1.0) == 0.0
    assert bounds.c2bit_closed_form(0.5) == pytest.approx(0.25 * (1 + math.log2(1.25)) + 0.5, abs=1e-15)
    assert bounds.c2bit_closed_form(0.5) == pytest.approx(0.830482, abs=1e-6)
    assert bounds.c2bit_closed_form(1 - 1e-12) < 1e-10


def test_c2bit_matches_optimized_mi():
    # independent path: maximize the 2-bit block MI over symmetric laws directly
    from bdcbounds.fibdc import build_fi_matrix
    for d in (0.2, 0.7):
        w = build_fi_matrix(2, d)
        res = optimize.minimize_scalar(
            lambda p1: -baa.mutual_information([0.5 - p1, p1, p1, 0.5 - p1], w),
            bounds=(0, 0.5), method="bounded", options={"xatol": 1e-12})
        assert -res.fun == pytest.approx(bounds.c2bit_closed_form(d), abs=1e-9)


def test_optimal_distribution():
    assert bounds.optimal_2bit_dist(0.0).as_tuple() == pytest.approx((0.25,) * 4)
    assert bounds.optimal_2bit_dist(1.0).as_tuple() == (0.5, 0.0, 0.0, 0.5)
    near = bounds.optimal_2bit_dist(0.999)
    assert near.p0 == pytest.approx(0.5, abs=1e-12) and near.p1 < 1e-12
    for d in (0.1, 0.5, 0.8):
        p = bounds.optimal_2bit_dist(d)
        assert p.p0 / p.p1 == pytest.approx(2 ** (2 * d / (1 - d)))
        assert p.p0 / (p.p0 + p.p1) == pytest.approx(bounds.gamma_star(d))


def test_two_bit_distribution_validation():
    with pytest.raises(DomainError):
        bounds.TwoBitDistribution(0.3, 0.2, 0.25, 0.25)
    with pytest.raises(DomainError):
        bounds.TwoBitDistribution(0.2, 0.2, 0.2, 0.2)


def test_theorem1_and_gamma_star():
    assert bounds.theorem1_bound(0.0) == 1.0
    assert bounds.theorem1_bound(1.0) == 0.0
    assert bounds.theorem1_bound(0.5) == pytest.approx(0.415241, abs=1e-6)
    assert bounds.gamma_star(0.0) == 0.5
    assert bounds.gamma_star(1.0) == 1.0
    assert bounds.gamma_star(0.5) == pytest.approx(0.8)
    for d in np.linspace(0, 1, 41):
        assert bounds.theorem1_bound(d) == pytest.approx(bounds.c2bit_closed_form(d) / 2)


def test_theorem2():
    for d in (0.0, 0.3, 0.9):
        assert bounds.theorem2_bound(d, 1.0) == pytest.approx(1 - d)
    for g in (0.2, 0.5, 0.99):
        assert bounds.theorem2_bound(0.0, g) == 1.0
        assert bounds.theorem2_bound(1.0, g) == 0.0
    with pytest.raises(DomainError):
        bounds.theorem2_bound(0.5, 0.0)
    with pytest.raises(DomainError):
        bounds.theorem2_bound(0.5, 1.2)
    assert bounds.theorem2_bound(0.5, 0.51) == pytest.approx(
        0.5 * (1 - binary_entropy(0.5 * 0.49 / (1 - 0.5 * 0.02))), abs=1e-15)


def test_c4():
    assert bounds.linear_gamma(0.0) == 0.5
    assert bounds.linear_gamma(1.0) == 1.0
    assert bounds.linear_gamma(0.5) == 0.75
    assert bounds.c4_bound(0.0) == 1.0
    assert bounds.c4_bound(1.0) == 0.0
    assert bounds.c4_bound(0.5) == pytest.approx(0.5 * (1 - binary_entropy(1 / 6)), abs=1e-15)
    assert bounds.c4_bound(0.5) == pytest.approx(0.174989, abs=1e-6)
    for d in np.linspace(0, 1, 101):
        assert bounds.c4_bound(d) == pytest.approx(bounds.c4_direct(d), abs=1e-12)


def test_cascade():
    assert bounds.cascade_bsc_bec(0.0, 0.0) == 1.0
    assert bounds.cascade_bsc_bec(0.3, 1.0) == 0.0
    assert bounds.cascade_bsc_bec(0.11, 0.5) == pytest.approx(0.250042, abs=1e-6)
    for d in (0.2, 0.6):
        for g in (0.51, 0.8):
            assert bounds.cascade_bsc_bec(bounds.flip_probability(d, g), d) == pytest.approx(
                bounds.theorem2_bound(d, g), abs=1e-15)


def test_reference_bounds():
    ref = bounds.reference_bounds(0.3)
    assert ref["erasure"] == pytest.approx(0.7)
    assert ref["rahmati_duman"] is None
    assert bounds.reference_bounds(0.65)["rahmati_duman"] == pytest.approx(0.145005, abs=1e-9)
    assert bounds.reference_bounds(0.1)["one_minus_h"] == pytest.approx(0.531004, abs=1e-6)
    assert bounds.reference_bounds(0.7)["one_minus_h"] is None


def test_golden_max():
    x, fx = bounds.golden_max(lambda v: -(v - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert fx == pytest.approx(0.0, abs=1e-15)


def _fine_oracle(objective, d):
    """10x finer grid in both coordinates, then a Nelder-Mead polish."""
    ts = np.logspace(-4, 1, 640)
    gs = np.linspace(0.01, 0.99, 981)
    vals = objective(ts[:, None], gs[None, :], d)
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    res = optimize.minimize(lambda v: -float(objective(math.exp(v[0]), v[1], d)),
                            [math.log(ts[i]), gs[j]], method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 10_000})
    return max(float(vals[i, j]), -res.fun)


@pytest.mark.parametrize("name,func,objective", [
    ("dg_lower_0.5", bounds.dg_lower_bound, bounds.dg_objective),
    ("dm_lower_0.5", bounds.dm_lower_bound, bounds.dm_objective),
])
def test_lower_bound_goldens(name, func, objective):
    value = func(0.5)
    assert value == pytest.approx(GOLDEN[name], abs=1e-12)
    assert value == pytest.approx(_fine_oracle(objective, 0.5), abs=1e-6)


def test_lower_bound_limits():
    assert bounds.dg_lower_bound(1.0) == 0.0
    assert bounds.dm_lower_bound(1.0) == 0.0
    assert bounds.dg_lower_bound(1e-5) == pytest.approx(1.0, abs=1e-3)
    # at d=1e-4 the bound sits just under 1 - h(d), which is itself 1.5e-3 below 1
    small = 1e-4
    assert bounds.dg_lower_bound(small) == pytest.approx(1 - binary_entropy(small), abs=2e-5)
    assert bounds.dg_lower_bound(small) <= 1.0


@pytest.mark.parametrize("d", [0.05, 0.3, 0.6, 0.9, 0.99])
def test_lower_bounds_below_upper(d):
    dg, dm = bounds.dg_lower_bound(d), bounds.dm_lower_bound(d)
    assert 0.0 <= dg <= dm + 1e-7
    assert dm <= min(1 - d, bounds.c4_bound(d), bounds.theorem1_bound(d))
