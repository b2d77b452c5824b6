import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from wovenframes.core import Frame
from wovenframes.generators import random_frame

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def small_frames(draw, dims=(2, 4), max_m=7, redundant=False):
    """Seeded random frames with bounded condition number."""
    d = draw(st.integers(*dims))
    m = draw(st.integers(d + (1 if redundant else 0), max(max_m, d + 1)))
    A = draw(st.floats(0.2, 2.0))
    ratio = draw(st.floats(1.0, 3.0))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_frame(d, m, (A, A * ratio), seed=seed)


@st.composite
def raw_families(draw, max_dim=4, max_m=6):
    """Arbitrary families (possibly non-spanning) with modest entries."""
    d = draw(st.integers(1, max_dim))
    m = draw(st.integers(1, max_m))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
    if draw(st.booleans()) and d > 1:
        v[:, -1] = 0  # confine to a hyperplane
    return Frame(d, v)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
