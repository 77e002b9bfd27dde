"""Shared pytest plumbing: acceptance verdict lines in the summary."""

_VERDICTS = []


def record_verdict(name: str, ok: bool, detail: str = "") -> bool:
    """Collect one pass/fail line for the end-of-run acceptance report."""
    word = "PASS" if ok else "FAIL"
    line = f"[{word}] {name}"
    if detail:
        line += f": {detail}"
    _VERDICTS.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
