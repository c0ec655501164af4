import numpy as np
import pytest

from gaussloc import kernels


@pytest.fixture
def rng():
    return np.random.default_rng(20071)


_BACKENDS = [kernels.python_backend]
if kernels.compiled_backend is not None:
    _BACKENDS.append(kernels.compiled_backend)


@pytest.fixture(params=_BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def backend(request):
    return request.param


_REPORT = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_REPORT] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line, then assert it."""
    lines = request.config.stash[_REPORT]

    def check(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else "")
        lines.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_REPORT, [])
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
