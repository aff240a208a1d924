import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _default_caps(monkeypatch):
    # tests that need other caps set them explicitly
    for name in ("RREACH_MAX_R", "RREACH_MAX_SLICE_DIM", "RREACH_MAX_SQUARE_CELLS",
                 "RREACH_MAX_STRING_PAIRS", "RREACH_MAX_BAND_CELLS"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion and fail the test on FAIL."""

    def _report(number: int, title: str, failures: list[str], detail: str = "") -> None:
        status = "PASS" if not failures else "FAIL"
        line = f"{status} criterion {number}: {title}"
        if detail:
            line += f" [{detail}]"
        if failures:
            line += " :: " + "; ".join(failures)
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not failures, line

    return _report
