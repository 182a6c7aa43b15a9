"""Level-wise gradual pattern mining with anti-monotone pruning."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .gradcore import (
    GradualPattern,
    all_items,
    as_fraction,
    build_item_matrix,
    check_threshold,
    enumerate_patterns,
    join_matrices,
    pattern_matrix,
    support_metric,
)

# below this many candidates a thread pool costs more than it saves
_PARALLEL_MIN = 64


@dataclass
class CandidateLevel:
    k: int
    entries: list = field(default_factory=list)  # (GradualPattern, matrix)


def gen_apriori_candidates(level: CandidateLevel, prune: bool = True) -> CandidateLevel:
    """Join k-item entries sharing k-1 items into (k+1)-item candidates.

    A candidate is dropped when it holds one attribute twice, when it is the
    complement of a candidate already produced, or (with ``prune``) when one
    of its k-item subsets is absent from ``level``.
    """
    k = level.k
    known = {p.canonical() for p, _ in level.entries}
    seen = set()
    out = CandidateLevel(k + 1)
    entries = level.entries
    for i, (p, mp) in enumerate(entries):
        for q, mq in entries[i + 1:]:
            items = set(p.items) | set(q.items)
            if len(items) != k + 1 or len({it.attr for it in items}) != k + 1:
                continue
            cand = GradualPattern(items)
            key = cand.canonical()
            if key in seen:
                continue
            if prune and k > 1 and any(
                GradualPattern(sub).canonical() not in known for sub in combinations(cand.items, k)
            ):
                continue
            seen.add(key)
            out.entries.append((cand, join_matrices(mp, mq)))
    return out


def _evaluate(entries, score, threads):
    if threads and threads > 1 and len(entries) >= _PARALLEL_MIN:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda e: score(e[1]), entries))
    return [score(m) for _, m in entries]


def mine_levels(ds, min_sup, metric="kendall", prune=True, threads=1):
    """Yield ``(pattern, support, matrix)`` for every frequent pattern, level by level.

    Patterns of size 1 are included; each complement pair appears once.
    """
    score = support_metric(metric)
    threshold = as_fraction(min_sup)
    level = CandidateLevel(1, [(GradualPattern([it]), build_item_matrix(ds, it)) for it in all_items(ds)])
    while level.entries:
        sups = _evaluate(level.entries, score, threads)
        frequent = CandidateLevel(level.k)
        for (p, m), s in zip(level.entries, sups):
            if s >= threshold:
                frequent.entries.append((p, m))
                if level.k > 1 or p.is_canonical():
                    yield p, s, m
        level = gen_apriori_candidates(frequent, prune)


def _validate(ds, min_sup):
    check_threshold("min_sup", min_sup)
    if len(ds.numeric_columns) < 2:
        raise ValueError("need at least 2 numeric attributes")


def mine_graank(ds, min_sup, metric="kendall", prune=True, threads=1):
    """Every frequent gradual pattern of at least 2 items, in canonical form.

    Each complement pair is reported once, by the member whose lowest
    attribute increases. Supports are exact fractions.
    """
    _validate(ds, min_sup)
    found = [
        p.canonical().with_support(s)
        for p, s, _ in mine_levels(ds, min_sup, metric, prune, threads)
        if len(p) >= 2
    ]
    return sorted(found)


def maximal_patterns(patterns):
    """Members of ``patterns`` not contained in another member or its complement."""
    pats = list(patterns)
    full = [set(p.items) for p in pats] + [set(p.complement().items) for p in pats]
    out = []
    for p in pats:
        s = set(p.items)
        if not any(s < other for other in full):
            out.append(p)
    return out


def expand_complements(patterns):
    """Both members of every complement pair."""
    out = set()
    for p in patterns:
        out.add(p)
        out.add(p.complement())
    return out


def brute_force_frequent(ds, min_sup, metric="kendall", min_size=2):
    """Oracle: score every gradual pattern and keep the frequent ones."""
    score = support_metric(metric)
    threshold = as_fraction(min_sup)
    out = []
    for p in enumerate_patterns(ds.numeric_columns, min_size):
        s = score(pattern_matrix(ds, p))
        if s >= threshold:
            out.append(p.with_support(s))
    return out


__all__ = [
    "CandidateLevel",
    "gen_apriori_candidates",
    "mine_graank",
    "mine_levels",
    "maximal_patterns",
    "expand_complements",
    "brute_force_frequent",
]
