import os
import subprocess
import sys

import numpy as np
import pytest

from bdcbounds import _kernels, _pykernels, bitseq
from bdcbounds.markov import markov_bits

BACKENDS = _kernels.available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def kern(request):
    return BACKENDS[request.param]


@pytest.mark.parametrize("L,R", [(1, 0), (1, 1), (3, 2), (5, 3), (6, 0), (6, 6)])
def test_table_matches_scalar_dp(kern, L, R):
    table = kern.subsequence_table(L, R)
    assert table.shape == (2**L, 2**R)
    xs, ys = bitseq.all_strings(L), bitseq.all_strings(R)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            assert table[i, j] == bitseq.subsequence_count(x, y)


@pytest.mark.parametrize("L,R", [(9, 4), (10, 7), (12, 6)])
def test_backends_agree_on_tables(L, R):
    ref = _pykernels.subsequence_table(L, R)
    for kern in BACKENDS.values():
        np.testing.assert_array_equal(kern.subsequence_table(L, R), ref)


def test_table_rejects_bad_shape(kern):
    with pytest.raises(ValueError):
        kern.subsequence_table(3, 4)
    with pytest.raises(OverflowError):
        kern.subsequence_table(63, 1)


def _pairs_oracle(u_gen, u_del, gamma, d, burn_in):
    out = markov_bits(u_gen, gamma)[u_del >= d][burn_in:]
    eq = sum(int(a == b) for a, b in zip(out[:-1], out[1:]))
    return max(len(out) - 1, 0), eq


@pytest.mark.parametrize("gamma,d,burn_in", [(0.7, 0.4, 0), (0.2, 0.9, 10), (1.0, 0.0, 5), (0.5, 1.0, 0)])
def test_pairs_match_oracle(kern, gamma, d, burn_in):
    rng = np.random.default_rng(3)
    u_gen, u_del = rng.random(2000), rng.random(2000)
    pairs, equal, n_out = kern.markov_deletion_pairs(u_gen, u_del, gamma, d, burn_in)
    assert (pairs, equal) == _pairs_oracle(u_gen, u_del, gamma, d, burn_in)
    assert n_out == int(np.count_nonzero(u_del >= d))


def test_backends_agree_on_pairs():
    rng = np.random.default_rng(11)
    u_gen, u_del = rng.random(100_000), rng.random(100_000)
    results = {name: k.markov_deletion_pairs(u_gen, u_del, 0.63, 0.27, 100) for name, k in BACKENDS.items()}
    assert len(set(results.values())) == 1


def test_empty_streams(kern):
    assert tuple(kern.markov_deletion_pairs(np.empty(0), np.empty(0), 0.5, 0.5, 0)) == (0, 0, 0)


def test_forced_fallback():
    env = dict(os.environ, BDCBOUNDS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import bdcbounds; print(bdcbounds.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
