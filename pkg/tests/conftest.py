import numpy as np
import pytest
from hypothesis import strategies as st

from hypergiant import Hypergraph


@st.composite
def small_hypergraphs(draw, max_n=12, ds=(2, 3, 4)):
    d = draw(st.sampled_from(ds))
    n = draw(st.integers(d, max_n))
    rows = draw(st.lists(st.lists(st.integers(1, n), min_size=d, max_size=d, unique=True),
                         max_size=3 * n, unique_by=lambda r: tuple(sorted(r))))
    return Hypergraph(d=d, n=n, edges=np.array(rows, dtype=np.int64).reshape(-1, d))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for a criterion, print it and assert it."""
    def record(label: str, ok: bool, text: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} {label}: {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
