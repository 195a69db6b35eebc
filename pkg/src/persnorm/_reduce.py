"""Z/2 column reduction of the triangle boundary matrix.

Reduced columns are stored sparsely (sorted edge positions in one pool,
looked up through an edge -> slot pivot map). The column being reduced lives
in a dense bitset, so adding a stored column costs one toggle per stored
entry rather than a merge over the whole working column.

Compiled with numba when it is importable; the plain function stays reachable
as ``reduce_triangle_columns.py_func``.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None


def _highest_bit(word):
    # word is a nonzero uint64
    pos = 0
    if word >> np.uint64(32):
        word = word >> np.uint64(32)
        pos += 32
    if word >> np.uint64(16):
        word = word >> np.uint64(16)
        pos += 16
    if word >> np.uint64(8):
        word = word >> np.uint64(8)
        pos += 8
    if word >> np.uint64(4):
        word = word >> np.uint64(4)
        pos += 4
    if word >> np.uint64(2):
        word = word >> np.uint64(2)
        pos += 2
    if word >> np.uint64(1):
        pos += 1
    return pos


def _reduce(boundary, n_edges, n_positive):
    n_pairs = 0
    pair_edge = np.empty(n_edges, np.int64)
    pair_tri = np.empty(n_edges, np.int64)
    if n_positive == 0:
        return pair_edge[:0].copy(), pair_tri[:0].copy()

    one = np.uint64(1)
    words = np.zeros((n_edges >> 6) + 1, np.uint64)
    slot_of = np.full(n_edges, -1, np.int64)
    starts = np.empty(n_edges, np.int64)
    lengths = np.empty(n_edges, np.int64)
    pool = np.empty(max(64, 4 * n_edges), np.int64)
    used = 0

    for j in range(boundary.shape[0]):
        for r in range(3):
            e = boundary[j, r]
            words[e >> 6] |= one << np.uint64(e & 63)
        count = 3
        low = boundary[j, 2]
        while True:
            s = slot_of[low]
            if s < 0:
                break
            st = starts[s]
            for q in range(st, st + lengths[s]):
                e = pool[q]
                bit = one << np.uint64(e & 63)
                w = e >> 6
                if words[w] & bit:
                    count -= 1
                else:
                    count += 1
                words[w] ^= bit
            if count == 0:
                break
            w = low >> 6
            while words[w] == 0:
                w -= 1
            low = (w << 6) + _highest_bit(words[w])
        if count == 0:
            continue

        # new pivot: move the bitset into the pool (ascending) and clear it
        if used + count > pool.shape[0]:
            grown = np.empty(2 * (used + count), np.int64)
            grown[:used] = pool[:used]
            pool = grown
        k = used
        for w in range((low >> 6) + 1):
            word = words[w]
            if word:
                for b in range(64):
                    if (word >> np.uint64(b)) & one:
                        pool[k] = (w << 6) + b
                        k += 1
                words[w] = np.uint64(0)
        slot_of[low] = n_pairs
        starts[n_pairs] = used
        lengths[n_pairs] = count
        used = k
        pair_edge[n_pairs] = low
        pair_tri[n_pairs] = j
        n_pairs += 1
        # only positive edges can be pivots; once all are taken the rest reduce to zero
        if n_pairs == n_positive:
            break
    return pair_edge[:n_pairs].copy(), pair_tri[:n_pairs].copy()


if njit is not None:
    _highest_bit = njit(cache=True)(_highest_bit)
    reduce_triangle_columns = njit(cache=True, nogil=True)(_reduce)
else:  # pragma: no cover
    reduce_triangle_columns = _reduce
    reduce_triangle_columns.py_func = _reduce
