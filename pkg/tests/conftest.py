import math

import numpy as np
import pytest

from twr_holonomy.shell import ShellPoint


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_regular_points(rng, n, rho_max=3.0):
    """Chart-regular points kept away from the polar axis."""
    rho = rng.uniform(0.05, rho_max, n)
    theta = rng.uniform(0.15, math.pi - 0.15, n)
    phi = rng.uniform(0.0, 2 * math.pi, n)
    return [ShellPoint(r, t, p) for r, t, p in zip(rho, theta, phi)]


def random_velocity(rng, max_speed=0.95):
    d = rng.normal(size=3)
    return d / np.linalg.norm(d) * rng.uniform(0.0, max_speed)


def random_rotation(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


# criterion number -> (passed, line); filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n][1])
