import math

import pytest

from lateralcp.polarizability import DIAMOND, SpheroidParticle


@pytest.fixture
def diamond15():
    """Diamond prolate spheroid, aspect 1.5, symmetry axis along x."""
    return SpheroidParticle.from_aspect(1.5, 2e-9, material=DIAMOND, density=3510.0, phi=0.0, theta=math.pi / 2)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)


_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
