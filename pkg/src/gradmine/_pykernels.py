"""Pure numpy versions of the order-matrix kernels.

Used whenever the compiled ``_ckernels`` module is unavailable, and as the
reference the compiled kernels are tested against.
"""

import numpy as np


def item_matrix(values, up):
    v = np.asarray(values, dtype=np.float64)
    if up:
        return (v[None, :] > v[:, None]).astype(np.uint8)
    return (v[None, :] < v[:, None]).astype(np.uint8)


def and_count(m1, m2):
    if m1.shape != m2.shape:
        raise ValueError("matrix dimensions differ")
    out = np.bitwise_and(m1, m2)
    return out, int(np.count_nonzero(out))


def count_ones(m):
    return int(np.count_nonzero(m))


def triangle_counts(m):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("order matrix must be square")
    return int(np.count_nonzero(np.triu(m, 1))), int(np.count_nonzero(np.tril(m, -1)))


def chain_lengths(m):
    m = np.asarray(m, dtype=bool)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise ValueError("order matrix must be square")
    best = np.zeros(n, dtype=np.int64)
    outdeg = m.sum(axis=1)
    queue = list(np.flatnonzero(outdeg == 0))
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        succ = best[m[u]]
        best[u] = (succ.max() if succ.size else 0) + 1
        preds = np.flatnonzero(m[:, u])
        outdeg[preds] -= 1
        queue.extend(p for p in preds if outdeg[p] == 0)
    if len(queue) != n:
        raise ValueError("order matrix contains a cycle")
    return best
