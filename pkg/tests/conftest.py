import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("]")[0].strip("[ "))):
            terminalreporter.write_line(line)
