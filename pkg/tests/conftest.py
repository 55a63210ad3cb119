from __future__ import annotations

import sys

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from noncompact.lp import SparseVector, SpaceSpec

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ps = st.sampled_from([1.5, 2.0, 2.5, 3.0, 4.0])
coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def sparse_vectors(draw, max_index=8):
    idx = draw(st.lists(st.integers(1, max_index), max_size=5, unique=True))
    return SparseVector((i, draw(coords)) for i in idx)


@pytest.fixture
def space2():
    return SpaceSpec(2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
