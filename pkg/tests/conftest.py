import pytest

_VERDICTS: list[str] = []


@pytest.fixture()
def verdict(request):
    """Record one summary line per acceptance criterion."""

    def record(ok, text, soft=False):
        tag = "PASS" if ok else ("WARN" if soft else "FAIL")
        line = f"{tag}  {text}"
        _VERDICTS.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
