import numpy as np
import pytest

from boomkit.model import BoomParams, StateVec


@pytest.fixture
def worked_params() -> BoomParams:
    """The hand-checkable stable parameter set used across the suite."""
    return BoomParams(
        alpha=1.0, beta=0.5, gamma=0.5, delta=0.1, epsilon=0.2, zeta=0.05,
        tau1=1.0, tau2=2.0,
    )


@pytest.fixture
def boom_start() -> StateVec:
    return StateVec(1.0, 0.01, 0.0, 0.0)


def make_series_text(times, values) -> str:
    lines = ["t,value"]
    lines += [f"{t},{v}" for t, v in zip(times, values)]
    return "\n".join(lines) + "\n"


def two_peak_series():
    """Strict local maxima at t=3 (value 10) and t=10 (value 8)."""
    times = np.arange(0.0, 13.0)
    values = np.array([1, 4, 7, 10, 6, 3, 2, 3, 5, 7, 8, 5, 2], dtype=float)
    return times, values
