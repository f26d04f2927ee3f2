import sys

import pytest


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: (len(k), k)):
        terminalreporter.write_line(results[key])


@pytest.fixture
def a3_point():
    from slantsum import builder_paper_examples
    return builder_paper_examples("A3-(2,2)")


@pytest.fixture
def gr22_point():
    from slantsum import builder_paper_examples
    return builder_paper_examples("Gr(2,2)")
