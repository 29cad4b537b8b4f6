import random

import pytest

from quatquad import Quaternion, from_roots

# One line per acceptance criterion, echoed in the terminal summary so
# the verdicts are visible even when the tests pass.
ACCEPTANCE_LINES = []


def record_acceptance(line):
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)

# Two roots from distinct congruence classes, used across the suite.
ALPHA = Quaternion(-1.3, 2.1, 0.17, -0.31)
BETA = Quaternion(1.4, 0.7, -0.23, 0.28)


@pytest.fixture(scope="session")
def demo_poly():
    return from_roots(ALPHA, BETA)


@pytest.fixture
def rng():
    return random.Random(20240817)


def random_quat(rng, scale=2.0):
    return Quaternion(rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                      rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def random_root_pair(rng, scale=2.0, min_gap=1e-2):
    """Two quaternions guaranteed to sit in different congruence classes."""
    from quatquad import congruent_distance
    while True:
        a = random_quat(rng, scale)
        b = random_quat(rng, scale)
        if congruent_distance(a, b) > min_gap:
            return a, b
