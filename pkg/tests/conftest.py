import re

import pytest

# criterion number -> detail line, filled in by tests/test_acceptance.py
ACCEPTANCE_DETAILS: dict[int, str] = {}

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


@pytest.fixture
def acceptance():
    def record(number: int, detail: str) -> None:
        ACCEPTANCE_DETAILS[number] = detail

    return record


def pytest_terminal_summary(terminalreporter):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            match = _CRITERION.search(getattr(report, "nodeid", ""))
            if match and getattr(report, "when", "call") in ("call", "setup"):
                number = int(match.group(1))
                if outcomes.get(number) != "FAIL":
                    outcomes[number] = "PASS" if status == "passed" else "FAIL"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(outcomes):
        detail = ACCEPTANCE_DETAILS.get(number, "no result recorded")
        terminalreporter.write_line(f"criterion {number}: {outcomes[number]}  {detail}")
