import numpy as np
import pytest

from blindnet.model import SbmModel

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_valid_model(rng: np.random.Generator, max_n: int = 200) -> SbmModel:
    """A random block model that passes validation (used by property tests)."""
    while True:
        k = int(rng.integers(2, 4))
        sizes = rng.integers(5, max(6, max_n // k), size=k)
        if sizes.sum() > max_n:
            continue
        omega = rng.uniform(0.2, 0.9, size=(k, k))
        omega = (omega + omega.T) / 2.0
        try:
            return SbmModel(group_sizes=tuple(int(s) for s in sizes), affinity=omega)
        except ValueError:
            continue


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
