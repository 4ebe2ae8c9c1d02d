import pytest
from hypothesis import settings

from hateseq.textprep import default_lexicons

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def lex():
    return default_lexicons()


@pytest.fixture(scope="session")
def fixture_corpus():
    from hateseq.corpus import binarize, load_dataset
    from hateseq.harness.fixture import FIXTURE_PATH

    return binarize(load_dataset(FIXTURE_PATH, "generic_csv"))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
