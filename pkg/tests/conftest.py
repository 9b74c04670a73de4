import sys
import numpy as np
import pytest

from roughsig import SampledPath, TruncatedTensor, path_signature
from roughsig._layout import tensor_size


def random_tensor(rng, d, depth, level0=None, scale=1.0):
    flat = scale * rng.normal(size=tensor_size(d, depth))
    if level0 is not None:
        flat[0] = level0
    return TruncatedTensor(d, depth, flat)


def random_path(rng, d, n_seg, scale=1.0):
    pts = np.cumsum(scale * rng.normal(size=(n_seg + 1, d)), axis=0)
    times = np.sort(rng.uniform(0.0, 1.0, size=n_seg + 1))
    times[0], times[-1] = 0.0, 1.0
    if np.any(np.diff(times) <= 0):
        times = np.linspace(0.0, 1.0, n_seg + 1)
    return SampledPath(times, pts)


def random_group(rng, d, depth, n_seg=4, scale=0.7):
    return path_signature(random_path(rng, d, n_seg, scale), depth)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
