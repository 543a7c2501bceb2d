import random

import pytest

_criteria: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _criteria.append((value, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria:
        terminalreporter.write_line(f"{outcome}  {name}")


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_symmetric(rnd, d, lo=0, hi=5):
    B = [[0] * d for _ in range(d)]
    for j in range(d):
        for k in range(j + 1, d):
            B[j][k] = B[k][j] = rnd.randrange(lo, hi)
    return B


def random_square(rnd, n, lo=0, hi=2):
    return [[rnd.randrange(lo, hi) for _ in range(n)] for _ in range(n)]
