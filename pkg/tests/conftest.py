import pytest

from k3mirror.lattice import lattice_K3

from scenarios import k3_scenario, toy_scenario

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        print(line)
        request.config.stash[_ACCEPTANCE].append(line)
        assert ok, line
    return record


@pytest.fixture(scope="session")
def K3():
    return lattice_K3()


@pytest.fixture(scope="session")
def toy():
    return toy_scenario()


@pytest.fixture(scope="session")
def k3s():
    return k3_scenario()
