import numpy as np
import pytest

TRI = [[0.0, 1.0, 9.0], [1.0, 0.0, 1.0], [9.0, 1.0, 0.0]]
LINE4 = [[0.0], [1.0], [10.0], [11.0]]


def random_dissimilarity(rng, n, low=0.0, high=10.0):
    """Symmetric, zero-diagonal, uniformly random; indefinite for most n >= 3."""
    a = rng.uniform(low, high, size=(n, n))
    a = np.triu(a, 1)
    return a + a.T


def random_subset(rng, n):
    size = int(rng.integers(1, n + 1))
    return np.sort(rng.choice(n, size=size, replace=False))


def brute_quadratic_form(A, lam):
    """-1/2 sum_ij lam_i lam_j A_ij with plain Python loops."""
    n = len(lam)
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += float(lam[i]) * float(lam[j]) * float(A[i][j])
    return -0.5 * total


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one PASS/FAIL line per acceptance criterion in the terminal summary

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    num, title = mark.args
    prev = _criteria.get(num, (title, True))
    _criteria[num] = (title, prev[1] and not rep.failed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, ok = _criteria[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num}: {title}")
