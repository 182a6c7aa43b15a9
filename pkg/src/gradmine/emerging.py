"""Temporal gradual emerging patterns (TGEPs).

Two miners:

* BT-GRAANK compares the maximal temporal patterns of consecutive transform
  steps through border differentials computed over pair decompositions.
* TRENC runs support-weighted ACO-GRAANK per step, divides the normalized
  pheromone matrices cell by cell into growth-rate matrices and builds
  patterns from the cells that clear ``min_growth``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .aco import _COLUMN, IRRELEVANT, run_aco_graank
from .gradcore import (
    DOWN,
    UP,
    GradualItem,
    GradualPattern,
    as_fraction,
    check_threshold,
    enumerate_patterns,
    pattern_matrix,
    pattern_support,
)
from .graank import maximal_patterns
from .temporal import (
    TimeLag,
    _orient,
    _selected_rows,
    estimate_time_lag,
    max_steps,
    mine_steps,
    step_seeds,
    transform,
)

INF = math.inf


def growth_rate(sup_from, sup_to):
    """``sup_to / sup_from`` as an exact fraction; inf for x/0 with x > 0, 0 for 0/0."""
    a, b = as_fraction(sup_from), as_fraction(sup_to)
    if a == 0:
        return INF if b > 0 else Fraction(0)
    return b / a


def decompose_maximal(p: GradualPattern) -> frozenset:
    """Every 2-item sub-pattern of ``p``."""
    if len(p) < 2:
        raise ValueError("decomposition needs a pattern of at least 2 items")
    return frozenset(GradualPattern(pair) for pair in combinations(p.items, 2))


@dataclass(frozen=True)
class Border:
    """``<left, right>``: the sets containing a left member and contained in a right member."""

    left: frozenset
    right: frozenset

    @property
    def left_rooted(self):
        return len(self.left) == 1

    def contains(self, x) -> bool:
        x = frozenset(x)
        return any(lo <= x for lo in self.left) and any(x <= r for r in self.right)

    def is_valid(self) -> bool:
        def antichain(family):
            return not any(a < b for a in family for b in family)

        return (
            antichain(self.left)
            and antichain(self.right)
            and all(any(lo <= r for r in self.right) for lo in self.left)
            and all(any(lo <= r for lo in self.left) for r in self.right)
        )


def right_border(sets) -> Border:
    """Left-rooted border ``<{{}}, maximal(sets)>``."""
    sets = {frozenset(s) for s in sets}
    maximal = frozenset(s for s in sets if not any(s < o for o in sets))
    return Border(frozenset([frozenset()]), maximal)


def _minimal(family):
    return {x for x in family if not any(y < x for y in family)}


def border_diff(universe: frozenset, others) -> frozenset:
    """Minimal subsets of ``universe`` contained in none of ``others``."""
    universe = frozenset(universe)
    others = [frozenset(o) for o in others]
    left = {frozenset()}
    for o in others:
        out = universe - o
        grown = {x for x in left if not x <= o}
        grown |= {x | {e} for x in left if x <= o for e in out}
        left = _minimal(grown)
        if not left:
            break
    return frozenset(left)


def border_differential(from_border: Border, to_border: Border) -> list:
    """Borders covering ``[to] \\ [from]`` for two left-rooted borders."""
    for b in (from_border, to_border):
        if not b.left_rooted or b.left != frozenset([frozenset()]):
            raise ValueError("border differential needs left-rooted borders <{{}}, R>")
    out = []
    for d in sorted(to_border.right, key=lambda s: sorted(map(repr, s))):
        if any(d <= c for c in from_border.right):
            continue
        left = border_diff(d, from_border.right)
        if left:
            out.append(Border(left, frozenset([d])))
    return out


def mbd_llborder(borders) -> list:
    """Differentials of each consecutive pair of left-rooted borders.

    Element ``k`` of the result lists the borders of ``[borders[k+1]] \\ [borders[k]]``.
    """
    borders = list(borders)
    for b in borders:
        if not b.left_rooted:
            raise ValueError("every border must be left-rooted")
    return [border_differential(a, b) for a, b in zip(borders, borders[1:])]


@dataclass(frozen=True)
class TemporalGradualEmergingPattern:
    pattern: GradualPattern
    growth_rate: object  # Fraction or inf
    lag_from: TimeLag | None
    lag_to: TimeLag | None
    sup_from: Fraction
    sup_to: Fraction
    step_from: int
    step_to: int

    @property
    def items(self):
        return self.pattern.items

    @property
    def lag_mean(self):
        lags = [lg.t for lg in (self.lag_from, self.lag_to) if lg is not None]
        return sum(lags) / len(lags) if lags else None


def _pair_sets(patterns):
    """Pair decompositions of ``patterns`` and their complements."""
    full = set(patterns) | {p.complement() for p in patterns}
    return [decompose_maximal(p) for p in full if len(p) >= 2]


def _lag_for(tds, p, min_sup, metric="chain"):
    m = pattern_matrix(tds.data, p)
    return estimate_time_lag(tds.time_diffs[_selected_rows(m, metric)], tds.time_diffs, min_sup)


def _emerging_between(ds, ref, res_from, res_to, min_sup, metric):
    from_border = right_border(_pair_sets(maximal_patterns(tg.pattern for tg in res_from.patterns)))
    to_border = right_border(_pair_sets(maximal_patterns(tg.pattern for tg in res_to.patterns)))
    found = set()
    for b in border_differential(from_border, to_border):
        (d,) = b.right
        items = sorted({it for pair in d for it in pair})
        attrs = {}
        for it in items:
            attrs.setdefault(it.attr, it)
        for k in range(2, len(attrs) + 1):
            for chosen in combinations(attrs.values(), k):
                p = GradualPattern(chosen)
                if ref not in p.attrs:
                    continue
                if b.contains(decompose_maximal(p)):
                    found.add(_orient(p, ref))
    lookup_to = {tg.pattern: tg for tg in res_to.patterns}
    out = []
    tds_from = res_from.transformed
    for p in sorted(found):
        tg = lookup_to[p]
        sup_from = pattern_support(tds_from.data, p, metric)
        out.append(
            TemporalGradualEmergingPattern(
                p.with_support(tg.support),
                growth_rate(sup_from, tg.support),
                _lag_for(tds_from, p, min_sup, metric),
                tg.lag,
                sup_from,
                tg.support,
                tds_from.step,
                res_to.transformed.step,
            )
        )
    return out


def mine_bt_graank(ds, ref_attr, min_sup, min_rep, metric="chain", threads=1):
    """TGEPs between consecutive transform steps via border differentials.

    A pattern qualifies for steps (s, s+1) when it holds the reference
    attribute, is frequent at s+1 and is not frequent at s.
    """
    ref = ds.index(ref_attr)
    if max_steps(ds.tuple_count, min_rep) < 2:
        raise ValueError("need at least 2 transform steps; lower min_rep")
    results = mine_steps(ds, ref, min_sup, min_rep, "exhaustive", None, metric, threads)
    out = []
    for a, b in zip(results, results[1:]):
        out.extend(_emerging_between(ds, ref, a, b, min_sup, metric))
    return out


def brute_force_tgeps(ds, ref_attr, min_sup, step_from, step_to, metric="chain"):
    """Oracle: patterns with the reference attribute frequent at ``step_to`` only."""
    ref = ds.index(ref_attr)
    threshold = as_fraction(min_sup)
    a = transform(ds, ref, step_from).data
    b = transform(ds, ref, step_to).data
    out = set()
    for p in enumerate_patterns(ds.numeric_columns, 2):
        if ref not in p.attrs:
            continue
        p = _orient(p, ref)
        if pattern_support(b, p, metric) >= threshold > pattern_support(a, p, metric):
            out.add(p)
    return sorted(out)


@dataclass
class SupportMatrices:
    """Per step: normalized support pheromones and accumulated lags."""

    attrs: tuple
    pheromones: np.ndarray  # q x 3 Fractions: accumulated sup(Sol) / iterations
    lag_sum: np.ndarray  # q x 3 seconds
    lag_count: np.ndarray  # q x 3
    iterations: int
    step: int = 0

    def lag_mean(self, row, col):
        c = self.lag_count[row, col]
        return self.lag_sum[row, col] / c if c else None


def build_support_matrices(tds, min_sup, seed=None, metric="chain", max_iter=None) -> SupportMatrices:
    """ACO-GRAANK on a transform with winners depositing their support.

    A winner adds its support to the cells of its items and to the
    Irrelevant cell of every attribute it leaves out; cells of its items also
    collect its lag when that lag is valid. Accumulated support is divided by
    the number of iterations. Without winners every cell stays 0.
    """
    attrs = tuple(tds.data.numeric_columns)
    q = len(attrs)
    acc = np.array([[Fraction(0)] * 3 for _ in range(q)], dtype=object)
    lag_sum = np.zeros((q, 3))
    lag_count = np.zeros((q, 3), dtype=np.int64)
    row = {a: r for r, a in enumerate(attrs)}

    def on_win(p, s, m):
        used = set(p.attrs)
        for it in p:
            acc[row[it.attr], _COLUMN[it.var]] += s
        for a in attrs:
            if a not in used:
                acc[row[a], IRRELEVANT] += s
        lag = estimate_time_lag(tds.time_diffs[_selected_rows(m, metric)], tds.time_diffs, min_sup)
        if lag.valid:
            for it in p:
                lag_sum[row[it.attr], _COLUMN[it.var]] += lag.t
                lag_count[row[it.attr], _COLUMN[it.var]] += 1

    run = run_aco_graank(tds.data, min_sup, seed, metric, max_iter, deposit=lambda p, s: float(s), on_win=on_win)
    norm = np.array([[v / run.iterations for v in r] for r in acc], dtype=object)
    return SupportMatrices(attrs, norm, lag_sum, lag_count, run.iterations, tds.step)


def growth_matrix(base, other) -> np.ndarray:
    """Cell-wise :func:`growth_rate` from ``base`` to ``other`` (q x 3 object array)."""
    base = np.asarray(base, dtype=object)
    other = np.asarray(other, dtype=object)
    if base.shape != other.shape:
        raise ValueError("matrices differ in shape")
    out = np.empty(base.shape, dtype=object)
    for idx in np.ndindex(base.shape):
        out[idx] = growth_rate(base[idx], other[idx])
    return out


def construct_tgep(attrs, growth, min_growth, lag_from=None, lag_to=None):
    """Pattern built from the Up/Down cells of ``growth`` clearing ``min_growth``.

    Per attribute the qualifying cell with the higher rate is used (Up on a
    tie). Returns ``(pattern, rate, lag_from, lag_to)`` or ``None`` when fewer
    than 2 attributes qualify. ``rate`` is the smallest member rate; the lags
    are means over the members' lag cells (``lag_*`` are callables
    ``(row, col) -> seconds or None``).
    """
    threshold = as_fraction(min_growth)
    picked = []
    for r, a in enumerate(attrs):
        up, down = growth[r, 0], growth[r, 1]
        best = None
        if up >= threshold:
            best = (UP, up)
        if down >= threshold and (best is None or down > up):
            best = (DOWN, down)
        if best is not None:
            picked.append((r, GradualItem(a, best[0]), best[1]))
    if len(picked) < 2:
        return None
    rate = min(g for _, _, g in picked)

    def mean_lag(fn):
        if fn is None:
            return None
        vals = [fn(r, _COLUMN[it.var]) for r, it, _ in picked]
        vals = [v for v in vals if v is not None]
        return sum(vals) / len(vals) if vals else None

    return GradualPattern(it for _, it, _ in picked), rate, mean_lag(lag_from), mean_lag(lag_to)


def _matrix_lag(seconds):
    # mean of lag-matrix cells; no membership support behind it
    return None if seconds is None else TimeLag("+", float(seconds), None, True)


def mine_trenc(ds, ref_attr, min_sup, min_rep, min_growth, base_step=1, seed=None, metric="chain", threads=1):
    """TGEPs from growth-rate matrices of each step against ``base_step``.

    Returns ``(patterns, matrices)`` where ``matrices`` lists the per-step
    :class:`SupportMatrices` (iteration counts included).
    """
    check_threshold("min_sup", min_sup)
    if float(min_growth) <= 0:
        raise ValueError("min_growth must be positive")
    ref = ds.index(ref_attr)
    steps = max_steps(ds.tuple_count, min_rep)
    if steps < 2:
        raise ValueError("need at least 2 transform steps; lower min_rep")
    if not 1 <= base_step <= steps:
        raise ValueError(f"base step must lie in [1, {steps}]")
    seeds = step_seeds(seed, steps)

    def one(s):
        return build_support_matrices(transform(ds, ref, s), min_sup, seeds[s - 1], metric)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            mats = list(pool.map(one, range(1, steps + 1)))
    else:
        mats = [one(s) for s in range(1, steps + 1)]

    base = mats[base_step - 1]
    tds_base = transform(ds, ref, base_step)
    out = []
    for m in mats:
        if m.step == base_step:
            continue
        built = construct_tgep(m.attrs, growth_matrix(base.pheromones, m.pheromones), min_growth, base.lag_mean, m.lag_mean)
        if built is None:
            continue
        p, rate, lf, lt = built
        if ref not in p.attrs:
            continue
        p = _orient(p, ref)
        tds = transform(ds, ref, m.step)
        sf = pattern_support(tds_base.data, p, metric)
        st = pattern_support(tds.data, p, metric)
        out.append(
            TemporalGradualEmergingPattern(
                p.with_support(st), rate, _matrix_lag(lf), _matrix_lag(lt), sf, st, base_step, m.step
            )
        )
    return out, mats
