import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from s3h.family import clifford_map, clifford_params  # noqa: E402
from s3h.grid import Grid  # noqa: E402

#: the member with r = 1/sqrt(2), phi = asinh(1) used throughout the suite
SQUARE_R = 2 ** -0.5
SQUARE_PHI = float(np.arcsinh(1.0))

_acceptance: dict = {}


@pytest.fixture(scope="session")
def square_torus():
    return clifford_map(clifford_params(SQUARE_R, SQUARE_PHI))


@pytest.fixture(scope="session")
def grid64():
    return Grid.from_bounds(0.0, 1.0, 0.0, 1.0, 64, 64)


@pytest.fixture(scope="session")
def square_frame(square_torus, grid64):
    """Analytic frame of the square torus on a 64 x 64 grid."""
    return square_torus.frame(grid64)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("::")[-1]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")


def sinh_gordon_frame(n=60, phi0=0.5):
    """FD frame of the mu = 0 map reconstructed from a sinh-Gordon profile on [-0.3, 0.3]^2."""
    from s3h.bonnet import BonnetData, integrate_frame
    from s3h.family import sinh_gordon_profile

    g = Grid.from_bounds(-0.3, 0.3, -0.3, 0.3, n, n)
    prof = sinh_gordon_profile(phi0, 0.0, g)
    data = BonnetData.from_fields(prof.field, np.zeros(g.shape, complex),
                                  phi_x=np.broadcast_to(prof.dphi, g.shape), phi_y=np.zeros(g.shape))
    return integrate_frame(data)


@pytest.fixture(scope="session")
def sg_frame():
    return sinh_gordon_frame(60)
