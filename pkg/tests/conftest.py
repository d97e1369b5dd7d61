import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)

_parts = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False, width=64)


def complex_arrays(shape):
    """Hypothesis strategy for complex arrays with bounded real and imaginary parts."""
    return st.tuples(hnp.arrays(np.float64, shape, elements=_parts), hnp.arrays(np.float64, shape, elements=_parts)).map(
        lambda p: p[0] + 1j * p[1]
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def gaussian(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
