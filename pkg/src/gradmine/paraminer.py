"""Transactional encoding of tuple pairs and closed gradual pattern search.

Every pair of tuples (i, j) with i < j becomes one transaction (a *tid*)
holding the strict variation of each attribute from tuple i to tuple j.
Patterns are searched depth-first over tid sets; support is the longest
chain of tuples the pattern orders, divided by n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .gradcore import (
    DOWN,
    UP,
    GradualItem,
    GradualPattern,
    as_fraction,
    check_threshold,
    enumerate_patterns,
    grite_support,
    pair_count,
)


@dataclass(frozen=True)
class EncodedTransactions:
    """Rows of gradual itemsets over tuple pairs.

    ``groups[r]`` lists the tids merged into row ``r`` and ``weights[r]`` is
    their count. Before reduction every group holds a single tid.
    """

    n: int
    itemsets: tuple
    groups: tuple
    weights: tuple

    @property
    def tids(self):
        return [t for g in self.groups for t in g]

    def __len__(self):
        return len(self.itemsets)


def encode_transactions(ds) -> EncodedTransactions:
    n = ds.tuple_count
    if n < 2:
        raise ValueError("encoding needs at least 2 tuples")
    cols = ds.numeric_columns
    data = ds.data
    itemsets, groups = [], []
    for i in range(n):
        for j in range(i + 1, n):
            items = []
            for a in cols:
                if data[j, a] > data[i, a]:
                    items.append(GradualItem(a, UP))
                elif data[j, a] < data[i, a]:
                    items.append(GradualItem(a, DOWN))
            itemsets.append(frozenset(items))
            groups.append(((i, j),))
    return EncodedTransactions(n, tuple(itemsets), tuple(groups), (1,) * len(itemsets))


def reduce_dataset(enc: EncodedTransactions) -> EncodedTransactions:
    """Merge rows with identical itemsets, keeping first-seen order."""
    merged = {}
    for items, group in zip(enc.itemsets, enc.groups):
        merged.setdefault(items, []).extend(group)
    itemsets = tuple(merged)
    groups = tuple(tuple(g) for g in merged.values())
    return EncodedTransactions(enc.n, itemsets, groups, tuple(len(g) for g in groups))


def sort_filter_items(enc: EncodedTransactions, min_len: int) -> dict:
    """Map each item to its sorted tids, dropping items with fewer than ``min_len``.

    The map is ordered by descending tid count, ties by item.
    """
    if min_len < 1:
        raise ValueError("min_len must be at least 1")
    tids = {}
    for items, group in zip(enc.itemsets, enc.groups):
        for it in items:
            tids.setdefault(it, []).extend(group)
    kept = [(it, tuple(sorted(ts))) for it, ts in tids.items() if len(ts) >= min_len]
    kept.sort(key=lambda e: (-len(e[1]), e[0]))
    return dict(kept)


def chain_threshold(min_sup, n: int) -> int:
    """Fewest tuples a chain needs to reach ``min_sup``."""
    return max(1, math.ceil(as_fraction(min_sup) * n))


def min_tid_length(min_sup, n: int) -> int:
    """Tids implied by a chain of the required length (every pair on it is ordered)."""
    L = chain_threshold(min_sup, n)
    return L * (L - 1) // 2


class _TidIndex:
    """Boolean tid masks per item, in the row-major order of (i, j), i < j."""

    def __init__(self, ds):
        n = ds.tuple_count
        self.n = n
        self.iu, self.ju = np.triu_indices(n, 1)
        self.masks = {}
        for a in ds.numeric_columns:
            col = ds.data[:, a]
            diff = col[self.ju] - col[self.iu]
            self.masks[GradualItem(a, UP)] = diff > 0
            self.masks[GradualItem(a, DOWN)] = diff < 0

    def relation(self, fwd, bwd):
        m = np.zeros((self.n, self.n), dtype=np.uint8)
        m[self.iu[fwd], self.ju[fwd]] = 1
        m[self.ju[bwd], self.iu[bwd]] = 1
        return m


def mine_paraminer(ds, min_sup):
    """Frequent closed gradual patterns of at least 2 items, canonical form.

    A pattern P is explored while its tids, plus the tids of its complement
    read backwards, can still hold a chain of the required length. Its
    support is the longest chain in the relation those tids induce, over n.
    A pattern is closed when no one-item extension keeps that support.
    """
    check_threshold("min_sup", min_sup)
    n = ds.tuple_count
    if n < 2:
        return []
    idx = _TidIndex(ds)
    need = chain_threshold(min_sup, n)
    min_len = min_tid_length(min_sup, n)
    attrs = ds.numeric_columns
    cache = {}

    def masks(p):
        fwd = np.ones(pair_count(n), dtype=bool)
        bwd = fwd.copy()
        for it in p:
            fwd &= idx.masks[it]
            bwd &= idx.masks[it.complement()]
        return fwd, bwd

    def chain(p):
        key = p.canonical()
        if key not in cache:
            fwd, bwd = masks(key)
            if int(fwd.sum()) + int(bwd.sum()) < min_len:
                cache[key] = 0
            else:
                cache[key] = kernels.longest_chain(idx.relation(fwd, bwd))
        return cache[key]

    found = []

    def closed(p, c):
        used = set(p.attrs)
        for a in attrs:
            if a in used:
                continue
            for v in (UP, DOWN):
                if chain(GradualPattern(p.items + (GradualItem(a, v),))) == c:
                    return False
        return True

    def expand(p, start):
        for pos in range(start, len(attrs)):
            for v in (UP, DOWN):
                q = GradualPattern(p.items + (GradualItem(attrs[pos], v),))
                c = chain(q)
                if c < need:
                    continue
                if len(q) >= 2 and closed(q, c):
                    found.append(q.with_support(Fraction(c, n)))
                expand(q, pos + 1)

    # canonical roots: the lowest attribute of a pattern increases
    for pos, a in enumerate(attrs):
        root = GradualPattern([GradualItem(a, UP)])
        if chain(root) >= need:
            expand(root, pos + 1)
    return sorted(found)


def brute_force_closed(ds, min_sup):
    """Oracle: closed frequent patterns by scoring every pattern."""
    threshold = as_fraction(min_sup)
    sup = {p: grite_support(ds, p) for p in enumerate_patterns(ds.numeric_columns, 1, canonical_only=True)}

    def lookup(p):
        return sup[p.canonical()]

    out = []
    for p, s in sup.items():
        if len(p) < 2 or s < threshold:
            continue
        if any(
            lookup(GradualPattern(p.items + (GradualItem(a, v),))) == s
            for a in ds.numeric_columns
            if a not in p.attrs
            for v in (UP, DOWN)
        ):
            continue
        out.append(p.with_support(s))
    return sorted(out)
