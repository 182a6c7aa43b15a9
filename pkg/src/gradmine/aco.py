"""Ant-colony miners.

ACO-GRAANK samples candidate patterns from a q x 3 pheromone matrix (one row
per attribute, columns Up/Down/Irrelevant) and reinforces the cells of every
frequent candidate. ACO-ParaMiner samples tuple-pair nodes weighted by an
n x n pheromone matrix over a cost matrix built from the transactional
encoding.

Randomness comes from ``numpy.random.Generator`` over PCG64; a run is fully
determined by its seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gradcore import (
    DOWN,
    UP,
    GradualItem,
    GradualPattern,
    as_fraction,
    build_item_matrix,
    check_threshold,
    pattern_matrix,
    support_metric,
)
from .paraminer import (
    chain_threshold,
    encode_transactions,
    min_tid_length,
    reduce_dataset,
    sort_filter_items,
)

IRRELEVANT = 2
_COLUMN = {UP: 0, DOWN: 1}


def make_rng(seed):
    """PCG64 generator; ``seed`` may be an int, a SeedSequence or a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


@dataclass
class PheromoneMatrix:
    """One row per attribute, columns Up, Down, Irrelevant."""

    attrs: tuple
    values: np.ndarray = None

    def __post_init__(self):
        self.attrs = tuple(self.attrs)
        if self.values is None:
            self.values = np.ones((len(self.attrs), 3))
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (len(self.attrs), 3):
            raise ValueError("pheromone matrix must be q x 3")
        if np.any(self.values < 0):
            raise ValueError("pheromones must be non-negative")

    def row(self, attr):
        return self.attrs.index(attr)

    def deposit(self, pattern, amount=1.0):
        for it in pattern:
            self.values[self.row(it.attr), _COLUMN[it.var]] += amount


def option_probabilities(ph: PheromoneMatrix, attribute) -> np.ndarray:
    """Probabilities of Up, Down and Irrelevant for ``attribute``."""
    row = ph.values[ph.row(attribute)]
    total = row.sum()
    if total <= 0:
        raise ValueError(f"pheromone row of attribute {attribute} has no mass")
    return row / total


def gen_pattern_candidate(ph: PheromoneMatrix, rng) -> GradualPattern:
    """Sample one option per attribute; keep the non-irrelevant ones.

    The result may hold fewer than 2 items.
    """
    totals = ph.values.sum(axis=1, keepdims=True)
    if np.any(totals <= 0):
        raise ValueError("pheromone row has no mass")
    cum = np.cumsum(ph.values / totals, axis=1)
    u = rng.random(len(ph.attrs))
    choice = (cum[:, :2] <= u[:, None]).sum(axis=1)
    return GradualPattern(
        GradualItem(a, UP if c == 0 else DOWN) for a, c in zip(ph.attrs, choice) if c != IRRELEVANT
    )


@dataclass
class AcoRun:
    patterns: list
    pheromones: PheromoneMatrix
    iterations: int
    repeated: bool
    losers: list = field(default_factory=list)


def _covers(small, big):
    return small.issubset(big) or small.complement().issubset(big)


def run_aco_graank(ds, min_sup, seed=None, metric="kendall", max_iter=None, deposit=None, on_win=None):
    """ACO-GRAANK with its full state.

    ``deposit(pattern, support)`` gives the pheromone increment for a winner
    (1 by default). ``on_win(pattern, support, matrix)`` is called for each
    winner in discovery order. Candidates are compared in canonical form.
    """
    check_threshold("min_sup", min_sup)
    attrs = tuple(ds.numeric_columns)
    if len(attrs) < 2:
        raise ValueError("need at least 2 numeric attributes")
    rng = make_rng(seed)
    score = support_metric(metric)
    threshold = as_fraction(min_sup)
    cap = max_iter if max_iter is not None else max(100, 10 * len(attrs))
    ph = PheromoneMatrix(attrs)
    cache = {}
    winners, losers = [], []
    seen = set()
    repeated = False
    it = 0
    while it < cap:
        it += 1
        sampled = gen_pattern_candidate(ph, rng)
        if len(sampled) < 2:
            continue
        cand = sampled.canonical()
        if cand in seen:
            repeated = True
            break
        if any(_covers(lo, cand) for lo in losers) or any(_covers(cand, w) for w in winners):
            continue
        for item in cand:
            if item not in cache:
                cache[item] = build_item_matrix(ds, item)
        m = pattern_matrix(ds, cand, cache)
        s = score(m)
        if s >= threshold:
            winners.append(cand.with_support(s))
            seen.add(cand)
            ph.deposit(sampled, 1.0 if deposit is None else deposit(sampled, s))
            if on_win is not None:
                on_win(sampled, s, m)
        else:
            losers.append(cand)
    return AcoRun(winners, ph, it, repeated, losers)


def mine_aco_graank(ds, min_sup, seed=None, metric="kendall", max_iter=None):
    """Frequent gradual patterns found by ACO-GRAANK, in discovery order."""
    return run_aco_graank(ds, min_sup, seed, metric, max_iter).patterns


@dataclass
class CostMatrix:
    """Per tuple pair, how many retained items contain it.

    ``values[i, j] = 1 / (1 + counts[i, j])``; pairs outside i < j keep 1.
    """

    counts: np.ndarray

    @property
    def values(self):
        return 1.0 / (1.0 + self.counts)

    def exact(self, i, j):
        return Fraction(1, 1 + int(self.counts[i, j]))


@dataclass
class NodeStructures:
    cost: CostMatrix
    pheromones: np.ndarray
    items: dict  # retained GradualItem -> sorted tids


def build_node_structures(ds, min_sup) -> NodeStructures:
    """Cost matrix, unit node pheromones and the filtered item/tid map.

    Items are retained when they occur in at least as many tids as a chain
    reaching ``min_sup`` would order.
    """
    check_threshold("min_sup", min_sup)
    enc = reduce_dataset(encode_transactions(ds))
    n = ds.tuple_count
    items = sort_filter_items(enc, max(1, min_tid_length(min_sup, n)))
    counts = np.zeros((n, n), dtype=np.int64)
    for tids in items.values():
        for i, j in tids:
            counts[i, j] += 1
    return NodeStructures(CostMatrix(counts), np.ones((n, n)), items)


@dataclass
class NodeRun:
    patterns: list
    pheromones: np.ndarray
    iterations: int
    repeated: bool


def run_aco_paraminer(ds, min_sup, evaporation=0.5, seed=None, max_iter=None):
    """ACO-ParaMiner with its final node pheromones."""
    if not 0 < evaporation < 1:
        raise ValueError(f"evaporation must lie in (0, 1), got {evaporation}")
    check_threshold("min_sup", min_sup)
    n = ds.tuple_count
    if n < 2:
        raise ValueError("need at least 2 tuples")
    rng = make_rng(seed)
    nodes = build_node_structures(ds, min_sup)
    ph = nodes.pheromones
    heuristic = 1.0 + nodes.cost.counts  # 1 / cost
    iu, ju = np.triu_indices(n, 1)
    tid_sets = {it: set(ts) for it, ts in nodes.items.items()}
    need = chain_threshold(min_sup, n)
    cap = max_iter if max_iter is not None else max(100, n)
    found, visited = {}, set()
    repeated = False
    it = 0
    while it < cap:
        it += 1
        w = ph[iu, ju] * heuristic[iu, ju]
        total = w.sum()
        if total <= 0:
            break
        k = int(rng.choice(len(w), p=w / total))
        node = (int(iu[k]), int(ju[k]))
        if node in visited:
            repeated = True
            break
        visited.add(node)
        members = [item for item, ts in tid_sets.items() if node in ts]
        shared = set.intersection(*(tid_sets[m] for m in members)) if members else {node}
        rows = tuple(zip(*shared))
        ok = False
        if len(members) >= 2:
            p = GradualPattern(members)
            s = support_metric("chain")(pattern_matrix(ds, p))
            if s * n >= need:
                ok = True
                found.setdefault(p.canonical(), s)
        if ok:
            ph[rows] += 1.0
        else:
            ph[rows] *= 1.0 - evaporation
    patterns = [p.with_support(s) for p, s in found.items()]
    return NodeRun(patterns, ph, it, repeated)


def mine_aco_paraminer(ds, min_sup, evaporation=0.5, seed=None, max_iter=None):
    """Frequent gradual patterns found by ACO-ParaMiner, in discovery order."""
    return run_aco_paraminer(ds, min_sup, evaporation, seed, max_iter).patterns
