from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

angles = st.floats(0.0, np.pi, allow_nan=False)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_density(rng, d, rank=None):
    rank = rank or d
    a = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = a @ a.conj().T
    return m / np.trace(m).real


# acceptance criterion number -> summary line
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
