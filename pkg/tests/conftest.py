import math

import numpy as np
import pytest
from hypothesis import strategies as st

from osc_complexity import GeodesicParams, GroupElement, Metric
from osc_complexity.group import AlgebraElement

ACCEPTANCE_LINES = []

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


@st.composite
def metrics(draw, b=None):
    a = draw(st.floats(min_value=0.5, max_value=2.0))
    bb = draw(st.floats(min_value=-1.5, max_value=1.5)) if b is None else b
    gap = draw(st.floats(min_value=0.3, max_value=2.0))
    return Metric(a, bb, (bb * bb + gap) / a)


group_elements = st.builds(GroupElement, finite, finite, finite, finite)
algebra_elements = st.builds(
    AlgebraElement, finite, finite, finite, st.floats(min_value=-6.0, max_value=6.0)
)
params = st.builds(
    GeodesicParams,
    *[st.floats(min_value=-1.5, max_value=1.5) for _ in range(4)],
)


def random_metric(rng):
    a = rng.uniform(0.5, 2.0)
    b = rng.uniform(-1.5, 1.5)
    return Metric(a, b, (b * b + rng.uniform(0.3, 2.0)) / a)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
