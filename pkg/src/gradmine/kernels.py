"""Backend selection for the order-matrix kernels.

The compiled Cython module is preferred. Setting ``GRADMINE_PURE=1`` in the
environment, or a missing build, selects the numpy implementation for every
kernel; ``and_count`` and ``count_ones`` use numpy either way. Both modules
expose the same five functions:

``item_matrix(values, up)``
    n x n uint8 matrix, entry (a, b) set when the value strictly rises
    (``up``) or strictly falls from tuple a to tuple b.
``and_count(m1, m2)``
    entrywise AND and the number of set entries of the result.
``count_ones(m)``
    number of set entries.
``triangle_counts(m)``
    set entries above and below the diagonal.
``chain_lengths(m)``
    for every node, the number of tuples on the longest chain starting
    there; raises ``ValueError`` on a cyclic relation.
"""

import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("GRADMINE_PURE"):
        raise ImportError("pure backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"


def _c(m):
    return np.ascontiguousarray(m, dtype=np.uint8)


def item_matrix(values, up):
    return _impl.item_matrix(np.ascontiguousarray(values, dtype=np.float64), bool(up))


# numpy's vectorized AND and count_nonzero beat the compiled loops at every
# size in benchmarks/bench_kernels.py, so these two always use numpy.
def and_count(m1, m2):
    out, total = _pykernels.and_count(_c(m1), _c(m2))
    return out, int(total)


def count_ones(m):
    return int(_pykernels.count_ones(_c(m)))


def triangle_counts(m):
    upper, lower = _impl.triangle_counts(_c(m))
    return int(upper), int(lower)


def chain_lengths(m):
    return _impl.chain_lengths(_c(m))


def longest_chain(m):
    """Number of tuples on the longest chain of the relation ``m``."""
    if m.shape[0] == 0:
        return 0
    return int(chain_lengths(m).max())


def first_longest_chain(m):
    """Lexicographically smallest longest chain, as a list of row indices."""
    n = m.shape[0]
    if n == 0:
        return []
    best = chain_lengths(m)
    length = int(best.max())
    node = int(np.flatnonzero(best == length)[0])
    chain = [node]
    m = np.asarray(m, dtype=bool)
    while best[node] > 1:
        node = int(np.flatnonzero(m[node] & (best == best[node] - 1))[0])
        chain.append(node)
    return chain
