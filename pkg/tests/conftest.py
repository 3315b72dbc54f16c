from fractions import Fraction

import numpy as np
import pytest

from spintomo.verify import random_density_matrix, random_hermitian, random_point

HALF = Fraction(1, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def spins(lo_twice, hi_twice):
    return [Fraction(k, 2) for k in range(lo_twice, hi_twice + 1)]


__all__ = ["HALF", "spins", "random_density_matrix", "random_hermitian", "random_point"]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
