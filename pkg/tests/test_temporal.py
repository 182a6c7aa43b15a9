from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import timed_datasets
from gradmine.dataset import NumericDataset
from gradmine.gradcore import GradualPattern
from gradmine.temporal import (
    TimeLag,
    estimate_time_lag,
    max_steps,
    mine_step,
    mine_tgraank,
    transform,
)

DAY = 86400


@pytest.mark.parametrize("n, rep, expected", [(5, 0.8, 1), (100, 0.9, 10), (10, 1.0, 1), (10, 0.99, 1), (3, 0.1, 2)])
def test_max_steps(n, rep, expected):
    assert max_steps(n, rep) == expected


def test_max_steps_errors():
    with pytest.raises(ValueError):
        max_steps(5, 0)
    with pytest.raises(ValueError):
        max_steps(5, 1.2)


def test_transform_table(table32):
    tds = transform(table32, "exercise", 1)
    rows = np.column_stack([tds.time_diffs / DAY, tds.data.data[:, 1:]]).tolist()
    assert rows == [[3, 1, 2], [1, 2, 3], [5, 3, 2], [2, 1, 3]]
    assert tds.representativity == Fraction(4, 5)


def test_transform_last_step(table32):
    tds = transform(table32, "exercise", 4)
    assert tds.rows == 1 and tds.representativity == Fraction(1, 5)


def test_transform_errors(table32, d22):
    with pytest.raises(ValueError, match="time column"):
        transform(d22, "temp", 1)
    with pytest.raises(ValueError, match="step"):
        transform(table32, "exercise", 5)
    with pytest.raises(ValueError):
        transform(table32, "date", 1)


def test_lag_example():
    lag = estimate_time_lag([1 * DAY, 5 * DAY], [3 * DAY, 1 * DAY, 5 * DAY, 2 * DAY], 0.5)
    assert lag.valid and lag.sign == "+"
    assert lag.sup == Fraction(1, 2)
    assert abs(lag.t / DAY - 1.5) <= 0.05
    assert lag.text == "~ +1.5 days"


def test_lag_at_median_needs_no_slide():
    diffs = [1.0, 2, 3, 4, 5]
    lag = estimate_time_lag([3.0, 3.0], diffs, 0.9)
    assert lag.valid and lag.slides == 0 and lag.sup == 1 and lag.t == 3


def test_lag_out_of_reach_is_invalid():
    diffs = [1.0, 2, 3, 4]
    lag = estimate_time_lag([400.0, 500.0], diffs, 0.5)
    assert not lag.valid and lag.slides == 20
    with pytest.raises(ValueError):
        estimate_time_lag([1.0], [], 0.5)


def test_lag_text_units():
    assert TimeLag("+", 4 * 604800, Fraction(1), True).text == "~ +4 weeks"
    assert TimeLag("+", 90, Fraction(1), True).text == "~ +1.5 minutes"
    assert TimeLag("+", 0.5, Fraction(1), True).text == "~ +0.5 seconds"


def test_tgraank_example(table32):
    got = {tg.pattern.render(table32.names): tg for tg in mine_tgraank(table32, "exercise", 0.5, 0.8)}
    tg = got["exercise+,stress-"]
    assert tg.support == Fraction(1, 2)
    assert abs(tg.lag.t / DAY - 1.5) <= 0.05 and tg.lag.sup == Fraction(1, 2)
    assert tg.step == 1 and tg.representativity == Fraction(4, 5)
    assert tg.reference_item.var == "+"


def test_only_step_one_with_high_rep():
    rng = np.random.default_rng(0)
    ds = NumericDataset(("t", "a", "b"), np.column_stack([np.arange(10) * 60.0, rng.integers(0, 5, (10, 2))]), 0)
    assert {tg.step for tg in mine_tgraank(ds, "a", 0.3, 0.99)} <= {1}


def test_aco_engine_deterministic(table32):
    a = mine_tgraank(table32, "exercise", 0.5, 0.6, engine="aco", seed=17)
    b = mine_tgraank(table32, "exercise", 0.5, 0.6, engine="aco", seed=17)
    assert [(t.pattern, t.lag, t.step) for t in a] == [(t.pattern, t.lag, t.step) for t in b]
    with pytest.raises(ValueError):
        mine_tgraank(table32, "exercise", 0.5, 0.8, engine="bogus")


def test_threads_do_not_change_result(table32):
    a = mine_tgraank(table32, "exercise", 0.4, 0.4, threads=1)
    b = mine_tgraank(table32, "exercise", 0.4, 0.4, threads=3)
    assert [(t.pattern, t.lag, t.step) for t in a] == [(t.pattern, t.lag, t.step) for t in b]


@given(timed_datasets(), st.integers(1, 11))
def test_transform_shape(ds, s):
    n = ds.tuple_count
    if s >= n:
        return
    tds = transform(ds, 1, s)
    assert tds.rows == n - s
    assert tds.representativity == Fraction(n - s, n)
    assert np.all(tds.time_diffs >= 0)


@given(
    st.lists(st.integers(0, 50), min_size=1, max_size=12),
    st.lists(st.integers(0, 200), min_size=0, max_size=6),
    st.sampled_from([0.2, 0.5, 0.8]),
)
def test_lag_bounds_and_slide_count(all_diffs, selected, min_sup):
    all_diffs = np.array(all_diffs, dtype=float)
    lag = estimate_time_lag(np.array(selected, dtype=float), all_diffs, min_sup)
    assert lag.slides <= 20
    q2 = np.median(all_diffs)
    if lag.valid:
        assert lag.sup >= Fraction(str(min_sup))
        assert all_diffs.min() - q2 - 1e-9 <= lag.t <= all_diffs.max() + q2 + 1e-9
        if lag.slides == 0:
            assert lag.t == q2


@given(timed_datasets(max_tuples=9), st.sampled_from([0.4, 0.6]), st.integers(0, 2**32))
def test_aco_engine_within_exhaustive(ds, min_sup, seed):
    exhaustive = {tg.pattern for tg in mine_step(ds, 1, 1, min_sup).patterns}
    for tg in mine_step(ds, 1, 1, min_sup, engine="aco", seed=seed).patterns:
        assert tg.pattern in exhaustive


def test_patterns_hold_reference(table32):
    ref = table32.index("exercise")
    for tg in mine_tgraank(table32, "exercise", 0.3, 0.4):
        assert ref in tg.pattern.attrs
        assert GradualPattern([tg.reference_item]).issubset(tg.pattern)
