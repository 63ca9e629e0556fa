import random

import pytest

# Filled by tests/test_acceptance.py; printed once at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: s.split("] ", 1)[1]):
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_word(rnd, n, a):
    return [rnd.randrange(a) for _ in range(n)]
