import pytest

from chronocollapse import standard_params


@pytest.fixture
def csl_ref():
    return standard_params("csl")


@pytest.fixture
def dp_ref():
    return standard_params("dp")


@pytest.fixture(params=["csl", "dp"])
def ref_model(request):
    return standard_params(request.param)


ACCEPTANCE_LINES = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion.

    Usage: ``criterion(n, ok, detail)``; the line is printed immediately
    and repeated in the terminal summary.
    """
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, {})

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
