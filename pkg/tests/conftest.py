import functools

import pytest

from kmoments.arith import build_context
from kmoments.expsums import gauss_table, k_family

SMALL_PRIMES = (5, 7, 11, 13, 17, 101)
# one line per acceptance criterion, filled by test_acceptance
VERDICTS: list[str] = []


@functools.lru_cache(maxsize=None)
def tables(p):
    ctx = build_context(p)
    gauss = gauss_table(ctx)
    return ctx, gauss, k_family(ctx, gauss.values)


@pytest.fixture(params=SMALL_PRIMES)
def small(request):
    return tables(request.param)


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS):
            terminalreporter.write_line(line)
