import pytest

# criterion number -> (status, seconds, summary); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, secs, summary = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {status:4s} {secs:7.2f}s  {summary}")
