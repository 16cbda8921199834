"""Prints the acceptance scoreboard after the run.

test_acceptance records one (criterion, passed) pair per criterion;
echoing them from a terminal-summary hook keeps the lines visible
under normal output capturing.
"""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")
