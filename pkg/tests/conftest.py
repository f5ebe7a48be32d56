import sys

from hypothesis import settings

sys.set_int_max_str_digits(0)

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

# filled by test_acceptance.verdict()
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
