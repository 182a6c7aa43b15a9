"""Gradual items, gradual patterns and their order matrices.

An order (concordance) matrix for a pattern is an n x n uint8 array whose
entry (a, b) is 1 when every item of the pattern is respected going from
tuple a to tuple b. Supports are returned as :class:`fractions.Fraction`
so that golden values compare exactly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels

UP = "+"
DOWN = "-"


class GradualItem(NamedTuple):
    attr: int
    var: str  # UP or DOWN

    def complement(self) -> "GradualItem":
        return GradualItem(self.attr, DOWN if self.var == UP else UP)

    def render(self, names=None) -> str:
        label = names[self.attr] if names is not None else str(self.attr)
        return f"{label}{self.var}"


class GradualPattern:
    """An immutable set of gradual items, at most one per attribute.

    Items are kept sorted by attribute. ``support`` is optional metadata and
    does not take part in equality or hashing.
    """

    __slots__ = ("items", "support")

    def __init__(self, items: Iterable[GradualItem], support=None):
        items = tuple(sorted(GradualItem(int(a), v) for a, v in items))
        for it in items:
            if it.var not in (UP, DOWN):
                raise ValueError(f"variation must be '+' or '-', got {it.var!r}")
        attrs = [it.attr for it in items]
        if len(set(attrs)) != len(attrs):
            raise ValueError("a pattern cannot hold two items on one attribute")
        self.items = items
        self.support = support

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __contains__(self, item):
        return item in self.items

    def __eq__(self, other):
        if not isinstance(other, GradualPattern):
            return NotImplemented
        return self.items == other.items

    def __lt__(self, other):
        return (len(self.items), self.items) < (len(other.items), other.items)

    def __hash__(self):
        return hash(self.items)

    def __repr__(self):
        body = ",".join(it.render() for it in self.items)
        if self.support is None:
            return f"GradualPattern({body})"
        return f"GradualPattern({body}; {self.support})"

    @property
    def attrs(self):
        return tuple(it.attr for it in self.items)

    def issubset(self, other: "GradualPattern") -> bool:
        return set(self.items) <= set(other.items)

    def union(self, other: "GradualPattern") -> "GradualPattern":
        return GradualPattern(set(self.items) | set(other.items))

    def with_support(self, support) -> "GradualPattern":
        return GradualPattern(self.items, support)

    def complement(self) -> "GradualPattern":
        return GradualPattern((it.complement() for it in self.items), self.support)

    def is_canonical(self) -> bool:
        return not self.items or self.items[0].var == UP

    def canonical(self) -> "GradualPattern":
        """Representative of the complement pair: lowest attribute carries Up."""
        return self if self.is_canonical() else self.complement()

    def render(self, names=None) -> str:
        return ",".join(it.render(names) for it in self.items)

    @classmethod
    def parse(cls, text: str, names) -> "GradualPattern":
        """Parse ``"temp-,hum+"`` against attribute ``names``."""
        index = {n: i for i, n in enumerate(names)}
        items = []
        for tok in filter(None, (t.strip() for t in text.split(","))):
            name, var = tok[:-1], tok[-1]
            if var not in (UP, DOWN) or name not in index:
                raise ValueError(f"bad gradual item {tok!r}")
            items.append(GradualItem(index[name], var))
        return cls(items)


def complement(x):
    """Flip every variation of an item or pattern."""
    return x.complement()


def _check_attr(ds, attr):
    attr = ds.index(attr)
    if attr == ds.time_column:
        raise ValueError(f"attribute {ds.names[attr]!r} is the time column")
    return attr


def build_item_matrix(ds, item: GradualItem) -> np.ndarray:
    """Order matrix of a single gradual item; ties give no order."""
    attr = _check_attr(ds, item.attr)
    return kernels.item_matrix(ds.data[:, attr], item.var == UP)


def join_matrices(m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    if m1.shape != m2.shape:
        raise ValueError(f"matrix dimensions differ: {m1.shape} vs {m2.shape}")
    return kernels.and_count(m1, m2)[0]


def pattern_matrix(ds, pattern: GradualPattern, cache=None) -> np.ndarray:
    """Joined order matrix of all items of ``pattern``.

    ``cache`` may map items to their prebuilt matrices.
    """
    n = ds.tuple_count
    if len(pattern) == 0:
        return np.ones((n, n), dtype=np.uint8) - np.eye(n, dtype=np.uint8)
    m = None
    for it in pattern:
        mi = cache[it] if cache is not None and it in cache else build_item_matrix(ds, it)
        m = mi if m is None else join_matrices(m, mi)
    return m


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def kendall_support(m: np.ndarray) -> Fraction:
    """Concordant tuple pairs over n(n-1)/2; 0 when there are fewer than 2 tuples.

    Pairs are read in tuple order: the upper triangle holds pairs respecting
    the pattern from the earlier to the later tuple, the lower triangle pairs
    respecting its complement. The support of a pattern is the larger of the
    two counts, which makes it equal to the support of its complement (the
    complement's matrix is the transpose).
    """
    n = m.shape[0]
    if n < 2:
        return Fraction(0)
    return Fraction(max(kernels.triangle_counts(m)), pair_count(n))


def chain_support(m: np.ndarray) -> Fraction:
    """Longest chain of tuples under ``m`` divided by n."""
    n = m.shape[0]
    if n == 0:
        return Fraction(0)
    return Fraction(kernels.longest_chain(m), n)


SUPPORT_METRICS = {"kendall": kendall_support, "chain": chain_support}


def support_metric(name: str):
    try:
        return SUPPORT_METRICS[name]
    except KeyError:
        raise ValueError(f"unknown support metric {name!r}; choose from {sorted(SUPPORT_METRICS)}") from None


def grite_support(ds, p: GradualPattern) -> Fraction:
    """Longest-chain support of ``p`` on ``ds``."""
    return chain_support(pattern_matrix(ds, p))


def pattern_support(ds, p: GradualPattern, metric: str = "kendall") -> Fraction:
    return support_metric(metric)(pattern_matrix(ds, p))


def all_items(ds):
    """Both variations of every numeric attribute, in attribute order."""
    return [GradualItem(a, v) for a in ds.numeric_columns for v in (UP, DOWN)]


def enumerate_patterns(attrs, min_size=1, canonical_only=False):
    """Every gradual pattern over ``attrs`` with at least ``min_size`` items.

    Exponential; intended for oracles on small attribute counts.
    """
    attrs = list(attrs)
    for k in range(max(min_size, 1), len(attrs) + 1):
        for chosen in combinations(attrs, k):
            for mask in range(1 << k):
                if canonical_only and mask & 1:
                    continue
                yield GradualPattern(
                    GradualItem(a, DOWN if mask >> i & 1 else UP) for i, a in enumerate(chosen)
                )


def is_frequent(support, min_sup) -> bool:
    """``support >= min_sup`` with ``min_sup`` read as an exact decimal."""
    return Fraction(support) >= as_fraction(min_sup)


def as_fraction(x) -> Fraction:
    """Exact fraction of a threshold; floats go through their shortest repr."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def check_threshold(name, value, low_open=True):
    v = float(value)
    if not (0 < v <= 1 if low_open else 0 <= v <= 1):
        raise ValueError(f"{name} must lie in (0, 1], got {value}")
    return value
