import numpy as np
import pytest

from seriesolve.field import PrimeField, Rationals

P = PrimeField(2013265921)  # 15 * 2^27 + 1
FIELDS = [P, PrimeField(101), PrimeField(2**61 - 1), Rationals()]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=FIELDS, ids=lambda F: F.spec())
def field(request):
    return request.param


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def report(request):
    """``report(k, ok, detail)`` records one PASS/FAIL line for criterion k."""
    def emit(k, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
        print(line)
        request.config.stash[ACCEPTANCE].append(line)
        return ok
    return emit
