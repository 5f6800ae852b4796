"""Shared pytest hooks: acceptance summary lines."""

import re

_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, derived from the
    recorded outcomes of the test_criterion_N tests."""
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if not m:
                continue
            n = int(m.group(1))
            ok = status == "passed" and outcomes.get(n, True)
            outcomes[n] = ok
    if not outcomes:
        return
    terminalreporter.write_line("")
    for n in sorted(outcomes):
        verdict = "PASS" if outcomes[n] else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {n}: {verdict}")
