import sys
import numpy as np
import pytest

from lagspheres import Params


@pytest.fixture
def params():
    return Params(4.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_sphere_points(rng, n):
    x = rng.uniform(-1.0, 1.0, n)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    return np.sqrt(1.0 - x * x) * np.exp(1j * theta), x


def random_tangent(params, rng, pts):
    from lagspheres.ambient import project_to_tangent
    return project_to_tangent(pts, rng.normal(size=pts.shape))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
