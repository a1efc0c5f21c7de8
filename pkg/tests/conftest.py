import pytest
from hypothesis import settings

# fixed example stream: the suite gives the same verdict on every run
settings.register_profile("repeatable", derandomize=True, deadline=None)
settings.load_profile("repeatable")

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def criterion():
    """Record a numbered acceptance result, then assert it."""
    def check(number: int, name: str, ok: bool, detail: str = ""):
        ACCEPTANCE[number] = (name, bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {name}  {detail}")
        assert ok, f"criterion {number} ({name}) failed: {detail}"
    return check


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {name}  {detail}")
