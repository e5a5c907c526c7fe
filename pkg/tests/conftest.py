import pytest

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(k, passed, detail)``."""

    def record(number, passed, detail):
        _CRITERIA.setdefault(number, []).append((bool(passed), detail))
        print(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        rows = _CRITERIA[number]
        ok = all(p for p, _ in rows)
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}")
        for passed, detail in rows:
            terminalreporter.write_line(f"    {'ok ' if passed else 'BAD'} {detail}")
