import sys

import pytest

from chancekit import kernels

BACKENDS = ["python"]
try:
    from chancekit.kernels import _ckernels  # noqa: F401
    BACKENDS.append("cython")
except ImportError:
    pass


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def toy():
    import synth
    return synth.toy_corpus()


def pytest_report_header(config):
    return f"chancekit kernel backend: {kernels.BACKEND} (available: {', '.join(BACKENDS)})"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
