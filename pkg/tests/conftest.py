import pytest

from plab import kernels

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="module", params=sorted(kernels.BACKENDS))
def backend(request):
    return kernels.get_backend(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
