"""Shared fixtures: the expensive zero scans run once per session."""

import pytest

from xigap import arith, zerofinder

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def tables():
    return arith.get_tables(2 * 10**6)


@pytest.fixture(scope="session")
def zeta_zeros_100():
    return zerofinder.scan_zeros("zeta", 10, 100, 1e-9)


@pytest.fixture(scope="session")
def xi_prime_1000():
    return zerofinder.scan_zeros("xi_prime", 10, 1000, 1e-9)


@pytest.fixture(scope="session")
def xi_prime_1000_2000():
    return zerofinder.scan_zeros("xi_prime", 1000, 2000, 1e-9)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
