"""Temporal gradual patterns: step transforms, fuzzy time lags, T-GRAANK.

A step-``s`` transform pairs the reference attribute of tuple i with every
other attribute of tuple i + s. Patterns mined on the transform that involve
the reference attribute are temporal: the co-variation shows up roughly
``t`` later, where ``t`` is estimated by sliding a triangular membership
function over the time differences of the tuples supporting the pattern.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .aco import run_aco_graank
from .dataset import NumericDataset
from .fuzztx import TriangularMF, memberships
from .gradcore import UP, GradualItem, as_fraction, check_threshold, pattern_matrix
from .graank import mine_levels

ENGINES = ("exhaustive", "aco")
SLIDES_EACH_WAY = 10

_UNITS = (("weeks", 604800), ("days", 86400), ("hours", 3600), ("minutes", 60), ("seconds", 1))


def max_steps(n: int, min_rep) -> int:
    """Largest transform step keeping a representativity of ``min_rep``; at least 1."""
    check_threshold("min_rep", min_rep)
    if n < 2:
        raise ValueError("need at least 2 tuples")
    z = math.floor(n * (1 - as_fraction(min_rep)))
    return min(max(1, z), n - 1)


@dataclass(frozen=True)
class TransformedDataset:
    step: int
    ref_attr: int
    data: NumericDataset  # same columns as the source; time column holds the reference rows' times
    time_diffs: np.ndarray
    representativity: Fraction

    @property
    def rows(self):
        return self.data.tuple_count


def transform(ds, ref_attr, s: int) -> TransformedDataset:
    if ds.time_column is None:
        raise ValueError("dataset has no time column")
    ref = ds.index(ref_attr)
    if ref == ds.time_column:
        raise ValueError("reference attribute cannot be the time column")
    n = ds.tuple_count
    if not 1 <= s < n:
        raise ValueError(f"step must lie in [1, {n - 1}], got {s}")
    data = ds.data[s:].copy()
    data[:, ref] = ds.data[: n - s, ref]
    t = ds.times
    data[:, ds.time_column] = t[: n - s]
    diffs = np.abs(t[s:] - t[: n - s])
    out = NumericDataset(ds.names, data, ds.time_column, ds.time_format)
    return TransformedDataset(s, ref, out, diffs, Fraction(n - s, n))


def _fmt(v):
    return f"{round(v, 2):g}"


@dataclass(frozen=True)
class TimeLag:
    sign: str
    t: float  # seconds
    sup: Fraction | None
    valid: bool
    slides: int = 0

    @property
    def text(self):
        mag = abs(self.t)
        for unit, size in _UNITS:
            if mag >= size or unit == "seconds":
                return f"~ {self.sign}{_fmt(mag / size)} {unit}"


def _slide_offsets():
    yield 0
    for k in range(1, SLIDES_EACH_WAY + 1):
        yield -k
    for k in range(1, SLIDES_EACH_WAY + 1):
        yield k


def estimate_time_lag(selected_diffs, all_diffs, min_sup) -> TimeLag:
    """Fuzzy lag from the time differences of a pattern's supporting tuples.

    A triangular MF is placed on the quartiles of ``all_diffs``. Its support
    is the share of ``selected_diffs`` with positive membership. While that
    share is below ``min_sup`` the MF slides by a tenth of the initial median,
    up to 10 times left, then up to 10 times right of the start.
    """
    all_diffs = np.asarray(all_diffs, dtype=np.float64)
    if all_diffs.size == 0:
        raise ValueError("no time differences")
    sel = np.asarray(selected_diffs, dtype=np.float64)
    threshold = as_fraction(min_sup)
    q1, q2, q3 = np.percentile(all_diffs, [25, 50, 75])
    step = 0.1 * q2
    first = None
    for slides, k in enumerate(_slide_offsets()):
        off = k * step
        mf = TriangularMF(q1 + off, q2 + off, q3 + off)
        sup = Fraction(int(np.count_nonzero(memberships(mf, sel) > 0)), sel.size) if sel.size else Fraction(0)
        if first is None:
            first = sup
        if sup >= threshold:
            return TimeLag("+", float(q2 + off), sup, True, slides)
        if step == 0:
            break
    return TimeLag("+", float(q2), first, False, slides)


@dataclass(frozen=True)
class TemporalGradualPattern:
    pattern: object  # GradualPattern, reference item included
    reference_item: GradualItem
    support: Fraction
    lag: TimeLag
    representativity: Fraction
    step: int

    @property
    def items(self):
        return self.pattern.items


def _orient(p, ref):
    """Complement representative in which the reference attribute increases."""
    for it in p:
        if it.attr == ref:
            return p if it.var == UP else p.complement()
    return p.canonical()


def _selected_rows(m, metric):
    if metric == "chain":
        return kernels.first_longest_chain(m)
    return np.flatnonzero(m.any(axis=0) | m.any(axis=1)).tolist()


@dataclass
class StepResult:
    transformed: TransformedDataset
    patterns: list  # TemporalGradualPattern, every frequent pattern of >= 2 items
    iterations: int = 0


def mine_step(ds, ref_attr, s, min_sup, engine="exhaustive", seed=None, metric="chain", threads=1):
    """Every frequent pattern of the step-``s`` transform, each with its lag."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    tds = transform(ds, ref_attr, s)
    ref = tds.ref_attr
    if tds.rows < 2:
        return StepResult(tds, [])
    iterations = 0
    if engine == "exhaustive":
        found = [(p, sup) for p, sup, _ in mine_levels(tds.data, min_sup, metric, threads=threads) if len(p) >= 2]
    else:
        run = run_aco_graank(tds.data, min_sup, seed, metric)
        found = [(p, p.support) for p in run.patterns]
        iterations = run.iterations
    out = []
    for p, sup in found:
        p = _orient(p, ref)
        m = pattern_matrix(tds.data, p)
        rows = _selected_rows(m, metric)
        lag = estimate_time_lag(tds.time_diffs[rows], tds.time_diffs, min_sup)
        ref_item = next((it for it in p if it.attr == ref), None)
        out.append(TemporalGradualPattern(p.with_support(sup), ref_item, sup, lag, tds.representativity, s))
    out.sort(key=lambda tg: tg.pattern)
    return StepResult(tds, out, iterations)


def step_seeds(seed, count):
    """Independent child seeds, one per transform step."""
    return np.random.SeedSequence(seed).spawn(count)


def mine_steps(ds, ref_attr, min_sup, min_rep, engine="exhaustive", seed=None, metric="chain", threads=1):
    """:class:`StepResult` for every step 1..max_steps, in step order."""
    check_threshold("min_sup", min_sup)
    steps = max_steps(ds.tuple_count, min_rep)
    seeds = step_seeds(seed, steps)

    def one(s):
        return mine_step(ds, ref_attr, s, min_sup, engine, seeds[s - 1], metric)

    if threads and threads > 1 and steps > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, range(1, steps + 1)))
    return [one(s) for s in range(1, steps + 1)]


def mine_tgraank(ds, ref_attr, min_sup, min_rep, engine="exhaustive", seed=None, metric="chain", threads=1):
    """Temporal gradual patterns holding the reference attribute and a valid lag.

    Sorted by step, then pattern.
    """
    results = mine_steps(ds, ref_attr, min_sup, min_rep, engine, seed, metric, threads)
    return [
        tg
        for r in results
        for tg in r.patterns
        if tg.reference_item is not None and tg.lag.valid
    ]
