import pytest

from curvpend import kernels


@pytest.fixture(params=kernels.available(), ids=lambda m: m.BACKEND)
def backend(request):
    """Each importable kernel module."""
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    RESULTS = getattr(mod, "RESULTS", None)
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
