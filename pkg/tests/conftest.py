import itertools

import pytest

from bdcbounds import baa


@pytest.fixture(scope="session")
def f6():
    """f-values for every L <= 6 at tol 1e-10."""
    return baa.f_values(baa.f_table(6, tol=1e-10))


def count_by_enumeration(x: str, y: str) -> int:
    """Count index subsets of x that spell y."""
    return sum(1 for idx in itertools.combinations(range(len(x)), len(y))
               if "".join(x[i] for i in idx) == y)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
