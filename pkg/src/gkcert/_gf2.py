"""Bit-packed GF(2) kernels.

Rows are stored as little-endian uint64 words: column ``j`` lives in word
``j >> 6`` at bit ``j & 63``.  All kernels are numba-compiled and operate
in place on arrays the caller owns; public wrappers in ``exactalg`` copy
first so that user-visible matrices are never mutated.
"""

from __future__ import annotations

import numpy as np
from numba import njit

ONE = np.uint64(1)


def n_words(cols: int) -> int:
    return max(1, (cols + 63) >> 6)


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into uint64 words, one row per matrix row."""
    dense = np.ascontiguousarray(dense, dtype=np.uint8)
    rows, cols = dense.shape
    words = n_words(cols)
    packed = np.packbits(dense, axis=1, bitorder="little")
    out = np.zeros((rows, words * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view(np.uint64).reshape(rows, words)


def unpack_rows(packed: np.ndarray, cols: int) -> np.ndarray:
    packed = np.ascontiguousarray(packed, dtype=np.uint64)
    if packed.shape[0] == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    as_bytes = packed.view(np.uint8).reshape(packed.shape[0], -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little", count=cols)


@njit(cache=True)
def rank_inplace(a, ncols):
    n, words = a.shape
    r = 0
    for c in range(ncols):
        w = c >> 6
        bit = ONE << np.uint64(c & 63)
        piv = -1
        for i in range(r, n):
            if a[i, w] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(w, words):
                t = a[r, k]
                a[r, k] = a[piv, k]
                a[piv, k] = t
        for i in range(r + 1, n):
            if a[i, w] & bit:
                for k in range(w, words):
                    a[i, k] ^= a[r, k]
        r += 1
        if r == n:
            break
    return r


@njit(cache=True)
def matmul(a, a_cols, b):
    """C = A @ B over GF(2); row i of C is the XOR of rows j of B with A[i, j] = 1."""
    n = a.shape[0]
    words = b.shape[1]
    c = np.zeros((n, words), dtype=np.uint64)
    for i in range(n):
        for j in range(a_cols):
            if (a[i, j >> 6] >> np.uint64(j & 63)) & ONE:
                for k in range(words):
                    c[i, k] ^= b[j, k]
    return c


@njit(cache=True)
def outer_accumulate(vecs, n):
    """Sum of v v^T over the rows v of ``vecs`` (each an n-bit vector)."""
    words = vecs.shape[1]
    out = np.zeros((n, words), dtype=np.uint64)
    for t in range(vecs.shape[0]):
        for i in range(n):
            if (vecs[t, i >> 6] >> np.uint64(i & 63)) & ONE:
                for k in range(words):
                    out[i, k] ^= vecs[t, k]
    return out


@njit(cache=True)
def transpose(a, rows, cols):
    out = np.zeros((cols, (rows + 63) >> 6 if rows > 0 else 1), dtype=np.uint64)
    for i in range(rows):
        wi = i >> 6
        bi = ONE << np.uint64(i & 63)
        for j in range(cols):
            if (a[i, j >> 6] >> np.uint64(j & 63)) & ONE:
                out[j, wi] |= bi
    return out


@njit(cache=True)
def is_symmetric(a, n):
    for i in range(n):
        for j in range(i + 1, n):
            x = (a[i, j >> 6] >> np.uint64(j & 63)) & ONE
            y = (a[j, i >> 6] >> np.uint64(i & 63)) & ONE
            if x != y:
                return False
    return True


@njit(cache=True)
def congruence_reduce(s, n):
    """Symmetric congruence reduction of a packed symmetric matrix, in place.

    Returns ``(cols, kinds, count)``: extracted n-bit vectors and their roles
    (0 = unit pivot v with contribution v v^T, 1/2 = the two halves u, w of a
    hyperbolic pair with contribution u w^T + w u^T).  ``s`` ends at zero.
    """
    words = s.shape[1]
    cols = np.zeros((n, words), dtype=np.uint64)
    kinds = np.zeros(n, dtype=np.int8)
    count = 0
    start = 0
    while True:
        piv = -1
        for i in range(start, n):
            if (s[i, i >> 6] >> np.uint64(i & 63)) & ONE:
                piv = i
                break
        if piv >= 0:
            v = s[piv].copy()
            for k in range(n):
                if (v[k >> 6] >> np.uint64(k & 63)) & ONE:
                    for w in range(words):
                        s[k, w] ^= v[w]
            cols[count] = v
            kinds[count] = 0
            count += 1
            continue
        # alternating residual: lowest nonzero entry (i, j)
        pi = -1
        pj = -1
        for i in range(n):
            for w in range(words):
                x = s[i, w]
                if x != 0:
                    b = 0
                    while not ((x >> np.uint64(b)) & ONE):
                        b += 1
                    pi = i
                    pj = w * 64 + b
                    break
            if pi >= 0:
                break
        if pi < 0:
            break
        u = s[pi].copy()
        v = s[pj].copy()
        for k in range(n):
            if (v[k >> 6] >> np.uint64(k & 63)) & ONE:
                for w in range(words):
                    s[k, w] ^= u[w]
            if (u[k >> 6] >> np.uint64(k & 63)) & ONE:
                for w in range(words):
                    s[k, w] ^= v[w]
        cols[count] = u
        kinds[count] = 1
        cols[count + 1] = v
        kinds[count + 1] = 2
        count += 2
        # diagonal stays zero in an alternating residual
        start = n
    return cols, kinds, count


@njit(cache=True)
def find_triangle(adj, n):
    """First triangle (i < j < k by i, then j) in a packed loopless adjacency matrix."""
    words = adj.shape[1]
    for i in range(n):
        for j in range(i + 1, n):
            if (adj[i, j >> 6] >> np.uint64(j & 63)) & ONE:
                for w in range(words):
                    x = adj[i, w] & adj[j, w]
                    if x != 0:
                        b = 0
                        while not ((x >> np.uint64(b)) & ONE):
                            b += 1
                        return i, j, w * 64 + b
    return -1, -1, -1
