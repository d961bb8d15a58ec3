import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture
def criterion():
    """record(n, passed, detail): one pass/fail line per acceptance criterion."""

    def record(n: int, passed: bool, detail: str) -> None:
        status = "PASS" if passed else "FAIL"
        _CRITERIA[n] = (status, detail)
        print(f"\ncriterion {n}: {status}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
