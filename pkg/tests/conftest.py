"""Shared pytest hooks.

The acceptance module records one pass/fail line per criterion; this hook
prints them after the run, outside output capturing, so the verdicts are
always visible in plain ``pytest -v`` output.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "EMITTED", None) if module else None
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
