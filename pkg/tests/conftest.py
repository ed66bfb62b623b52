import pytest

from intdpid import run
from intdpid.scenario import preset


@pytest.fixture(scope="session")
def case1():
    """Both noise-free closed-loop runs, shared across modules (each takes a few seconds)."""
    return {kind: run(preset(f"case1_{kind}")) for kind in ("han", "intd")}


# criterion number -> (passed, detail), filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
