"""Shared test configuration: prints the acceptance scoreboard after a run."""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # The acceptance module registers one line per criterion as its tests
    # run; find it under whatever name pytest imported it.
    module = next(
        (
            m
            for name, m in sys.modules.items()
            if name.rpartition(".")[2] == "test_acceptance" and hasattr(m, "scoreboard")
        ),
        None,
    )
    if module is None:
        return
    lines = module.scoreboard()
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
