import numpy as np
import pytest

from coarsegrain import _kernels


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    with _kernels.use_backend(request.param):
        yield request.param


ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(n, ok, detail):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE[n] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
