import math
import random

import pytest

from lightroute import build, build_light_graph, build_marked_graph
from lightroute.io import generate_points

THETA = math.pi / 4
R = 2.0


def hedgehog(seed: int) -> list:
    """Centres with dense arcs of neighbours, so that cones overflow and
    edges get dropped with semi-protected records."""
    rng = random.Random(seed)
    pts = []
    for _ in range(3):
        cx, cy = rng.uniform(0, 6), rng.uniform(0, 6)
        pts.append((cx, cy))
        for _ in range(rng.randint(1, 3)):
            k = rng.randint(6, 14)
            a0 = rng.uniform(0, 2 * math.pi)
            span = math.radians(rng.uniform(20, 44))
            rad = rng.uniform(0.5, 1.5)
            for i in range(k):
                a = a0 + span * i / (k - 1)
                r = rad * (1 + rng.uniform(0, 0.03))
                pts.append((cx + r * math.cos(a), cy + r * math.sin(a)))
    for _ in range(15):
        pts.append((rng.uniform(-1, 7), rng.uniform(-1, 7)))
    return pts


class Built:
    def __init__(self, pts, theta=THETA, r=R):
        self.points = pts
        self.mesh = build(pts)
        self.g = build_marked_graph(self.mesh, theta)
        self.lg = build_light_graph(self.g, r)


@pytest.fixture(scope="session")
def fixture200():
    return Built(generate_points(200, "uniform", 7))


@pytest.fixture(scope="session")
def hedgehogs():
    return [Built(hedgehog(seed)) for seed in range(4)]


@pytest.fixture(scope="session")
def small_uniform():
    return [Built(generate_points(40, "uniform", seed)) for seed in range(3)]


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one verdict line per acceptance criterion."""
    log = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number: int, passed: bool, detail: str):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        log.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
