# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Must stay bit-for-bit equivalent to ``_pykernels``."""

import numpy as np

from libc.stdint cimport int64_t, uint8_t
from libc.string cimport memset

MAX_TABLE_L = 62


def subsequence_table(int L, int R):
    """Occurrence counts of every length-``R`` string inside every length-``L`` string.

    Row ``x`` and column ``y`` are the MSB-first integer values of the strings.
    """
    if L < 0 or R < 0 or R > L:
        raise ValueError(f"need 0 <= R <= L, got L={L}, R={R}")
    if L > MAX_TABLE_L:
        raise OverflowError(f"L={L} exceeds the 64-bit count limit ({MAX_TABLE_L})")
    cdef Py_ssize_t nx = (<Py_ssize_t>1) << L
    cdef Py_ssize_t ny = (<Py_ssize_t>1) << R
    out = np.zeros((nx, ny), dtype=np.int64)
    cdef int64_t[:, ::1] o = out
    # layer k of the per-row trie lives at offset 2**k - 1
    buf = np.zeros((<Py_ssize_t>1 << (R + 1)) - 1, dtype=np.int64)
    cdef int64_t[::1] cnt = buf
    cdef Py_ssize_t x, v, size, src, dst
    cdef int i, k, kmin, kmax, b
    for x in range(nx):
        memset(&cnt[0], 0, cnt.shape[0] * sizeof(int64_t))
        cnt[0] = 1
        for i in range(L):
            b = (x >> (L - 1 - i)) & 1
            kmax = i if i < R - 1 else R - 1
            kmin = R - L + i
            if kmin < 0:
                kmin = 0
            k = kmax
            while k >= kmin:
                size = (<Py_ssize_t>1) << k
                src = size - 1
                dst = 2 * size - 1
                for v in range(size):
                    cnt[dst + 2 * v + b] += cnt[src + v]
                k -= 1
        src = ny - 1
        for v in range(ny):
            o[x, v] = cnt[src + v]
    return out


def markov_deletion_pairs(const double[::1] u_gen, const double[::1] u_del,
                          double gamma, double d, Py_ssize_t burn_in):
    """Adjacent-pair statistics of a Markov string passed through the deletion channel.

    Returns ``(pairs, equal, n_out)`` counted after dropping ``burn_in`` output symbols.
    """
    cdef Py_ssize_t n = u_gen.shape[0]
    if u_del.shape[0] != n:
        raise ValueError("uniform streams must have equal length")
    cdef Py_ssize_t i, seen = 0
    cdef int64_t pairs = 0, equal = 0
    cdef uint8_t bit = 0, prev = 0
    if n == 0:
        return 0, 0, 0
    bit = 1 if u_gen[0] < 0.5 else 0
    for i in range(n):
        if i > 0 and u_gen[i] >= gamma:
            bit ^= 1
        if u_del[i] < d:
            continue
        if seen > burn_in:
            pairs += 1
            if bit == prev:
                equal += 1
        prev = bit
        seen += 1
    return pairs, equal, seen
