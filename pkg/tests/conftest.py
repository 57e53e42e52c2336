import pytest

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    """``record(k, passed, detail)`` stores the outcome of criterion ``k``."""

    def record(k: int, passed: bool, detail: str) -> bool:
        _ACCEPTANCE[k] = (bool(passed), detail)
        line = f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
