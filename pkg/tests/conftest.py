import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request, capsys):
    """Record and print a one-line pass/fail verdict for an acceptance criterion."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        lines.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
