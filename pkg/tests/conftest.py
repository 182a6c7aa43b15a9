from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gradmine.dataset import NumericDataset, load_csv

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default",
    max_examples=200,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def d22():
    return load_csv(DATA / "d22.csv")


@pytest.fixture
def d23():
    return load_csv(DATA / "d23.csv")


@pytest.fixture
def table32():
    return load_csv(DATA / "table32.csv")


@pytest.fixture
def flies():
    return load_csv(DATA / "flies.csv")


@pytest.fixture
def humidity():
    return load_csv(DATA / "humidity.csv")


@st.composite
def small_datasets(draw, max_attrs=6, max_tuples=10, min_attrs=2, min_tuples=2, levels=4):
    """Integer-valued datasets; few distinct levels so ties occur often."""
    q = draw(st.integers(min_attrs, max_attrs))
    n = draw(st.integers(min_tuples, max_tuples))
    cells = draw(st.lists(st.integers(0, levels - 1), min_size=n * q, max_size=n * q))
    data = np.array(cells, dtype=float).reshape(n, q)
    return NumericDataset(tuple(f"x{j}" for j in range(q)), data)


@st.composite
def timed_datasets(draw, max_attrs=4, max_tuples=12, min_tuples=4):
    q = draw(st.integers(2, max_attrs))
    n = draw(st.integers(min_tuples, max_tuples))
    gaps = draw(st.lists(st.integers(1, 5), min_size=n, max_size=n))
    cells = draw(st.lists(st.integers(0, 3), min_size=n * q, max_size=n * q))
    data = np.column_stack([np.cumsum(gaps) * 3600.0, np.array(cells, dtype=float).reshape(n, q)])
    return NumericDataset(("t", *(f"x{j}" for j in range(q))), data, time_column=0)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
