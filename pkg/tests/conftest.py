import time

import numpy as np
import pytest

from steiner_sym import GridSpec, RunConfig, ShapeSpec, run

# pass/fail lines from the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []

CONVERGENCE_SHAPES = ("l_shape", "annulus", "two_balls", "box_union")
CONVERGENCE_SEEDS = (0, 1, 2, 3, 4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def grid256():
    return GridSpec(2, 256, 2.0)


@pytest.fixture(scope="session")
def grid128():
    return GridSpec(2, 128, 2.0)


class TraceStore:
    """Records of the 2-D convergence runs, computed once per session."""

    def __init__(self):
        self.records = {}
        self.seconds = 0.0

    def get(self, shape, seed, steps=300, resolution=256):
        key = (shape, seed, steps, resolution)
        if key not in self.records:
            t0 = time.perf_counter()
            cfg = RunConfig(GridSpec(2, resolution, 2.0), ShapeSpec(shape), steps, "uniform", seed)
            self.records[key], _ = run(cfg)
            self.seconds += time.perf_counter() - t0
        return self.records[key]


@pytest.fixture(scope="session")
def traces():
    return TraceStore()


def trace_array(records, name):
    return np.array([getattr(r, name) for r in records])
