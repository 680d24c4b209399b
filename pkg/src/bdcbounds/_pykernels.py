"""Numpy versions of the compiled kernels, used when the extension is unavailable."""

import numpy as np

MAX_TABLE_L = 62

# rows of the trie DP processed at once; bounds peak memory near 2**(R+1) * CHUNK int64
CHUNK = 256


def subsequence_table(L, R):
    """Occurrence counts of every length-``R`` string inside every length-``L`` string.

    Row ``x`` and column ``y`` are the MSB-first integer values of the strings.
    """
    if L < 0 or R < 0 or R > L:
        raise ValueError(f"need 0 <= R <= L, got L={L}, R={R}")
    if L > MAX_TABLE_L:
        raise OverflowError(f"L={L} exceeds the 64-bit count limit ({MAX_TABLE_L})")
    nx = 1 << L
    out = np.zeros((nx, 1 << R), dtype=np.int64)
    for start in range(0, nx, CHUNK):
        xs = np.arange(start, min(start + CHUNK, nx), dtype=np.int64)
        layers = [np.ones((len(xs), 1), dtype=np.int64)]
        layers += [np.zeros((len(xs), 1 << k), dtype=np.int64) for k in range(1, R + 1)]
        for i in range(L):
            ones = ((xs >> (L - 1 - i)) & 1).astype(bool)
            zeros = ~ones
            for k in range(min(i, R - 1), max(R - L + i, 0) - 1, -1):
                src = layers[k]
                dst = layers[k + 1].reshape(len(xs), 1 << k, 2)
                dst[zeros, :, 0] += src[zeros]
                dst[ones, :, 1] += src[ones]
        out[xs] = layers[R]
    return out


def markov_deletion_pairs(u_gen, u_del, gamma, d, burn_in):
    """Adjacent-pair statistics of a Markov string passed through the deletion channel.

    Returns ``(pairs, equal, n_out)`` counted after dropping ``burn_in`` output symbols.
    """
    u_gen = np.asarray(u_gen, dtype=np.float64)
    u_del = np.asarray(u_del, dtype=np.float64)
    if u_gen.shape != u_del.shape:
        raise ValueError("uniform streams must have equal length")
    if u_gen.size == 0:
        return 0, 0, 0
    bits = np.empty(u_gen.size, dtype=np.uint8)
    bits[0] = 1 if u_gen[0] < 0.5 else 0
    flips = (u_gen[1:] >= gamma).astype(np.uint8)
    bits[1:] = bits[0] ^ (np.cumsum(flips, dtype=np.int64) & 1).astype(np.uint8)
    out = bits[u_del >= d]
    tail = out[burn_in:]
    if tail.size < 2:
        return 0, 0, int(out.size)
    equal = int(np.count_nonzero(tail[1:] == tail[:-1]))
    return int(tail.size - 1), equal, int(out.size)
