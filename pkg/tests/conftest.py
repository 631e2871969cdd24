import pytest

from twistranks.harness import run_gates


@pytest.fixture(scope="session")
def gated_cache(tmp_path_factory):
    """A cache directory in which the monsky and redei gates have passed."""
    path = tmp_path_factory.mktemp("cache")
    run_gates(path, ["monsky", "redei"], H=600)
    return path


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(RESULTS):
            terminalreporter.write_line(line)
