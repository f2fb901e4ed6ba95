import pytest

ACCEPTANCE_LINES: list[str] = []

from kunneth.modules import circle_module, module_from_operad
from kunneth.operads import ass_operad, ger_operad


@pytest.fixture(scope="session")
def ass4():
    return ass_operad(4)


@pytest.fixture(scope="session")
def ger4():
    return ger_operad(4)


@pytest.fixture(scope="session")
def r1():
    return module_from_operad(ass_operad(4), 4)


@pytest.fixture(scope="session")
def s1():
    return circle_module(4, ass_operad(4))


@pytest.fixture(autouse=True)
def _no_ambient_cache(monkeypatch):
    # a cache dir inherited from the shell would make CLI tests order-dependent
    monkeypatch.delenv("KUNNETH_CACHE_DIR", raising=False)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
