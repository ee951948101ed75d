import functools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sasakisub.cli import sample_points
from sasakisub.model import load_fixture

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# the generic sample point used throughout the worked examples
P_A = np.array([0.3, -0.2, 0.1, 0.4, 0.5])


@functools.lru_cache(maxsize=None)
def fixture(name):
    return load_fixture(name)


def points(name, count, seed=42):
    m = fixture(name)
    return sample_points(m, count, seed, m.sample.low, m.sample.high)


@pytest.fixture
def p_a():
    return P_A.copy()


def phi_basis(p):
    """E_1..E_2n, ξ of the standard Sasakian structure on R^{2n+1} (coordinates x, y, z)."""
    p = np.asarray(p, float)
    n = (p.size - 1) // 2
    out = []
    for i in range(n):
        e = np.zeros(p.size)
        e[n + i] = 2.0
        out.append(e)
    for i in range(n):
        e = np.zeros(p.size)
        e[i] = 2.0
        e[-1] = 2.0 * p[n + i]
        out.append(e)
    xi = np.zeros(p.size)
    xi[-1] = 2.0
    return out + [xi]


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
