import pytest

_LINES = []


class Verdict:
    """Records one pass/fail line per acceptance criterion."""

    def __call__(self, key: str, ok: bool, detail: str) -> bool:
        line = f"{key} {'PASS' if ok else 'FAIL'}: {detail}"
        print(line)
        _LINES.append(line)
        return ok


@pytest.fixture
def verdict():
    return Verdict()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES):
            terminalreporter.write_line(line)
