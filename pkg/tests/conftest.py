import pytest

from sullivan.cli import corpus_names, load_document

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def corpus():
    return {name: load_document(name)[0] for name in corpus_names()}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
