import math

import pytest

from quietzone import _backend, amplitudes, cylwave, incident, scattering
from quietzone.geometry import symmetric_config

_USERS = (_backend, cylwave, incident, amplitudes, scattering)


@pytest.fixture(params=_backend.available())
def backend(request, monkeypatch):
    """Run the test once per importable kernel implementation."""
    mod = _backend.load(request.param)
    for user in _USERS:
        monkeypatch.setattr(user, "kernels", mod)
    return mod


@pytest.fixture
def cfg4():
    return symmetric_config(4, 1.0, 2.0)


@pytest.fixture
def psi17():
    return math.radians(17.0)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
