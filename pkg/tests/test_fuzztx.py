import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradmine.dataset import NumericDataset, dumps_csv, load_csv
from gradmine.fuzztx import TriangularMF, cross, crossing_boundary, membership, memberships


def clock(h, m):
    return h * 3600 + m * 60


def test_membership_points():
    mf = TriangularMF(clock(11, 58), clock(12, 0), clock(12, 2))
    assert membership(mf, clock(12, 0)) == 1.0
    assert membership(mf, mf.a) == 0.0 and membership(mf, mf.c) == 0.0
    assert membership(mf, clock(12, 1)) == 0.5
    assert membership(mf, clock(13, 0)) == 0.0


def test_degenerate_sides():
    right_only = TriangularMF(0, 0, 10)
    assert membership(right_only, 0) == 1 and membership(right_only, 5) == 0.5
    assert membership(right_only, -1) == 0
    with pytest.raises(ValueError):
        TriangularMF(2, 1, 3)


@given(st.floats(-10, 10), st.floats(0, 5), st.floats(0, 5), st.lists(st.floats(-30, 30), max_size=20))
def test_vectorized_matches_scalar(b, left, right, ts):
    mf = TriangularMF(b - left, b, b + right)
    assert np.allclose(memberships(mf, ts), [membership(mf, t) for t in ts])


def test_flies_humidity_crossing(flies, humidity):
    c = cross([flies, humidity], ["flies", "humidity"])
    ds = c.to_dataset()
    assert [ds.time_format and t for t in ds.times.tolist()] == [clock(12, m) for m in (0, 2, 4, 6)]
    assert ds.column("humidity").tolist() == [30, 35, 40, 50]
    assert ds.column("flies").tolist() == [50, 160, 243, 259]
    assert c.provenance.tolist() == [[0, 0], [1, 1], [3, 2], [4, 3]]
    assert c.boundary == 120
    text = dumps_csv(ds)
    assert text.splitlines()[0] == "time,flies,humidity"
    assert text.splitlines()[1] == "12:00,50,30"


def test_self_cross():
    ds = load_csv(b"time,x\n10:00,1\n10:05,2\n10:07,3\n10:20,4\n10:21,5\n")
    c = cross([ds, ds])
    assert len(c) == ds.tuple_count
    assert c.columns == ("s0.x", "s1.x")
    assert np.array_equal(c.values[:, 0], c.values[:, 1])


def test_disjoint_ranges():
    a = load_csv(b"time,x\n10:00,1\n10:01,2\n")
    b = load_csv(b"time,y\n11:00,1\n11:01,2\n")
    assert len(cross([a, b])) == 0


def test_errors(d22, flies):
    with pytest.raises(ValueError):
        cross([flies])
    with pytest.raises(ValueError, match="time column"):
        cross([flies, d22])
    single = load_csv(b"time,x\n10:00,1\n")
    with pytest.raises(ValueError, match="single tuple"):
        cross([single, single])
    assert crossing_boundary([single, flies]) == 60


def test_scaling_smoke():
    rng = np.random.default_rng(3)
    sources = []
    for k in range(3):
        t = np.sort(rng.choice(20000, 400, replace=False)) * 30.0
        sources.append(NumericDataset(("t", f"v{k}"), np.column_stack([t, rng.random(400)]), 0))
    c = cross(sources)
    assert len(c) <= 400


@st.composite
def sources(draw):
    out = []
    for k in range(draw(st.integers(2, 3))):
        times = sorted(draw(st.sets(st.integers(0, 60), min_size=1, max_size=8)))
        vals = list(range(len(times)))
        out.append(NumericDataset(("t", f"v{k}"), np.column_stack([np.array(times) * 60.0, vals]), 0))
    return out


@given(sources())
def test_invariants(srcs):
    if all(s.tuple_count == 1 for s in srcs):
        return
    c = cross(srcs)
    assert len(c) <= min(s.tuple_count for s in srcs)
    # each source tuple used at most once, and every row has all sources
    assert c.provenance.shape == (len(c), len(srcs))
    for k in range(len(srcs)):
        col = c.provenance[:, k].tolist()
        assert len(col) == len(set(col))
    # values come from the consumed tuples
    for row, picks in zip(c.values, c.provenance):
        assert row.tolist() == [srcs[k].data[i, 1] for k, i in enumerate(picks)]
    assert np.all(np.diff(c.time) > 0)
    steps = np.diff(c.time) / c.boundary
    assert np.allclose(steps, np.round(steps))
    again = cross(srcs)
    assert np.array_equal(again.values, c.values) and np.array_equal(again.provenance, c.provenance)
