import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from rotortree.generators import random_tree_like

DATA = Path(__file__).parent / "data"


def random_zero_player(seed: int, max_n: int = 60, max_mult: int = 4):
    rng = random.Random(seed)
    n = rng.randint(3, max_n)
    return random_tree_like(n, rng.randint(1, max_mult), rng.randint(1, min(4, n - 1)), seed=seed)


def random_simple(seed: int, max_n: int = 40):
    rng = random.Random(seed)
    n = rng.randint(3, max_n)
    return random_tree_like(n, 1, rng.randint(1, min(4, n - 1)), seed=seed)


seeds = st.integers(min_value=0, max_value=10**6)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
