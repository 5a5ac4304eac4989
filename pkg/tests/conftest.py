import pytest

_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    The lines are echoed immediately and repeated in the terminal summary, so
    they show up even when output capture is on.
    """
    lines = request.config.stash[_VERDICTS]

    def record(number: int, passed: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
