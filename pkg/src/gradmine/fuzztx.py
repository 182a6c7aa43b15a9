"""Fuzzy temporal crossing of unrelated time-series."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .dataset import NumericDataset


@dataclass(frozen=True)
class TriangularMF:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not self.a <= self.b <= self.c:
            raise ValueError(f"need a <= b <= c, got ({self.a}, {self.b}, {self.c})")


def membership(mf: TriangularMF, t: float) -> float:
    """Triangular degree of ``t``; a zero-width side is a vertical edge."""
    a, b, c = mf.a, mf.b, mf.c
    if t == b:
        return 1.0
    if a < t < b:
        return (t - a) / (b - a)
    if b < t < c:
        return (c - t) / (c - b)
    return 0.0


def memberships(mf: TriangularMF, ts) -> np.ndarray:
    """Vectorized :func:`membership`."""
    ts = np.asarray(ts, dtype=np.float64)
    out = np.zeros_like(ts)
    if mf.b > mf.a:
        left = (ts > mf.a) & (ts < mf.b)
        out[left] = (ts[left] - mf.a) / (mf.b - mf.a)
    if mf.c > mf.b:
        right = (ts > mf.b) & (ts < mf.c)
        out[right] = (mf.c - ts[right]) / (mf.c - mf.b)
    out[ts == mf.b] = 1.0
    return out


@dataclass(frozen=True)
class CrossedDataset:
    time: np.ndarray  # MF centers, seconds
    columns: tuple  # output column names, source order
    values: np.ndarray  # rows x columns
    provenance: np.ndarray  # rows x sources, consumed tuple index
    boundary: float
    time_format: str | None = None

    def __len__(self):
        return len(self.time)

    def to_dataset(self, time_name="time") -> NumericDataset:
        """Time column first, then every crossed attribute."""
        name = time_name
        while name in self.columns:
            name = "_" + name
        data = np.column_stack([self.time, self.values]) if len(self.time) else np.empty((0, len(self.columns) + 1))
        return NumericDataset((name, *self.columns), data, 0, self.time_format)


def crossing_boundary(sources) -> float:
    """Largest of the per-source minimum gaps between consecutive timestamps."""
    gaps = []
    for ds in sources:
        t = np.sort(ds.times)
        if len(t) >= 2:
            gaps.append(float(np.diff(t).min()))
    if not gaps:
        raise ValueError("every source has a single tuple; no boundary can be derived")
    boundary = max(gaps)
    if boundary <= 0:
        raise ValueError("sources repeat timestamps; boundary would be zero")
    return boundary


def _column_names(sources, labels):
    attrs = [[ds.names[j] for j in ds.numeric_columns] for ds in sources]
    counts = Counter(a for names in attrs for a in names)
    return [
        f"{label}.{a}" if counts[a] > 1 else a
        for label, names in zip(labels, attrs)
        for a in names
    ]


def cross(sources, labels=None) -> CrossedDataset:
    """Align ``sources`` on a shared time grid.

    A triangular MF of half-width ``boundary`` slides from the earliest to the
    latest timestamp in steps of ``boundary``. At each center every source
    offers its unused tuple of highest positive membership (ties go to the
    earlier timestamp, then the lower index). A row is emitted only when all
    sources offer one; those tuples are then used up.
    """
    sources = list(sources)
    if len(sources) < 2:
        raise ValueError("crossing needs at least 2 sources")
    labels = list(labels) if labels is not None else [f"s{k}" for k in range(len(sources))]
    if len(labels) != len(sources):
        raise ValueError("one label per source")
    for label, ds in zip(labels, sources):
        if ds.time_column is None:
            raise ValueError(f"source {label!r} has no time column")
        if ds.tuple_count == 0:
            raise ValueError(f"source {label!r} is empty")

    boundary = crossing_boundary(sources)
    t_min = min(float(ds.times.min()) for ds in sources)
    t_max = max(float(ds.times.max()) for ds in sources)
    used = [np.zeros(ds.tuple_count, dtype=bool) for ds in sources]
    times = [np.asarray(ds.times) for ds in sources]
    # per source: order of preference among equal degrees
    prefer = [np.lexsort((np.arange(len(t)), t)) for t in times]

    centers, rows, prov = [], [], []
    k = 0
    while True:
        center = t_min + k * boundary
        if center > t_max:
            break
        k += 1
        mf = TriangularMF(center - boundary, center, center + boundary)
        picks = []
        for t, u, order in zip(times, used, prefer):
            deg = memberships(mf, t[order])
            deg[u[order]] = 0.0
            best = int(np.argmax(deg))  # first maximum = earliest, lowest index
            if deg[best] <= 0:
                break
            picks.append(int(order[best]))
        if len(picks) != len(sources):
            continue
        for u, idx in zip(used, picks):
            u[idx] = True
        centers.append(center)
        prov.append(picks)
        rows.append(np.concatenate([ds.data[idx, ds.numeric_columns] for ds, idx in zip(sources, picks)]))

    columns = tuple(_column_names(sources, labels))
    values = np.array(rows) if rows else np.empty((0, len(columns)))
    provenance = np.array(prov, dtype=np.int64) if prov else np.empty((0, len(sources)), dtype=np.int64)
    return CrossedDataset(np.array(centers), columns, values, provenance, boundary, sources[0].time_format)
