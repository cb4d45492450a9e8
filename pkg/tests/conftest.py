"""Shared test settings and the acceptance summary."""

from hypothesis import settings

settings.register_profile("qheat", max_examples=40, deadline=None)
settings.load_profile("qheat")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
