import pytest

from primewalks import character_from_images, sieve
from primewalks.cuspforms import delta_coefficients

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run full-scale reproductions")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale reproductions (run with --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: [int(x) if x.isdigit() else x
                                                        for x in k.replace(".", " ").split()]):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def acceptance():
    def record(key: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}"
        ACCEPTANCE_LINES[key] = line
        print(line)
        return ok
    return record


@pytest.fixture(scope="session")
def small_table():
    return sieve(1_300_000)


@pytest.fixture(scope="session")
def big_table():
    # p_{10^6} = 15485863
    return sieve(15_500_000)


@pytest.fixture(scope="session")
def tau_table():
    return delta_coefficients(110_000)


@pytest.fixture(scope="session")
def chi7():
    return character_from_images(7, [1])
