"""Fixed-step integration of the delayed boom model by the method of steps.

The scheme is classic fourth-order Runge-Kutta on a uniform grid with cubic
Hermite dense output over the stored (state, derivative) columns. Delayed
lookups y2(t - tau) read the Hermite interpolant of the already-computed
past; for t - tau <= 0 they read the constant initial history. Because the
grid is uniform, every delayed stage lookup uses a fixed index offset and
fixed Hermite weights, which are precomputed once per run.

The step-size precondition h <= tau/4 (for each positive delay) guarantees
stage lookups never reach into the interval currently being advanced, so the
method stays fully explicit. Derivative discontinuities propagating from the
constant history at multiples of the delays are not specially tracked; the
step precondition keeps the induced error below the package's accuracy
targets.

Runs are deterministic: identical inputs give bit-identical trajectories.
Any component growing past 1e12 in magnitude (or going non-finite) aborts
with :class:`DivergenceError` carrying the blow-up time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DivergenceError, DomainError, ValidationError
from .model import BoomParams, StateVec

__all__ = [
    "HistoryMode",
    "HistorySpec",
    "Trajectory",
    "ScalarTrajectory",
    "integrate",
    "sample_at",
    "integrate_hutchinson",
]

_BLOWUP_LIMIT = 1e12


class HistoryMode(enum.Enum):
    """How the pre-start history is defined. Only the constant mode exists."""

    CONSTANT_EQUAL_TO_INITIAL = "constant_equal_to_initial"


@dataclass(frozen=True)
class HistorySpec:
    """Initial state plus the rule extending it to t <= 0."""

    initial_state: StateVec
    history_mode: HistoryMode = HistoryMode.CONSTANT_EQUAL_TO_INITIAL

    def __post_init__(self) -> None:
        for name in ("y1", "y2", "y3", "y4"):
            if not math.isfinite(getattr(self.initial_state, name)):
                raise DomainError(f"non-finite initial_state.{name}")


def _hermite_weights(th: float, h: float) -> tuple[float, float, float, float]:
    """Cubic Hermite basis at local coordinate th in [0, 1], interval width h."""
    t2 = th * th
    t3 = t2 * th
    w0 = 2.0 * t3 - 3.0 * t2 + 1.0
    w1 = 3.0 * t2 - 2.0 * t3
    v0 = (t3 - 2.0 * t2 + th) * h
    v1 = (t3 - t2) * h
    return w0, w1, v0, v1


def _stage_stencil(tau: float, h: float, c: float):
    """Fixed lookup stencil for a delayed read at stage offset c.

    On the uniform grid the query t_n + c*h - tau always falls at the same
    fractional position within some past interval, so the bracketing index
    offset and the Hermite weights do not depend on n. Returns
    (hist_limit, k, w0, w1, v0, v1): the read uses the constant history while
    n <= hist_limit, else interpolates between grid points n+k and n+k+1.
    """
    x = tau / h
    s = c - x
    k = math.floor(s)
    th = s - k
    w0, w1, v0, v1 = _hermite_weights(th, h)
    return x - c, k, w0, w1, v0, v1


@dataclass(frozen=True)
class Trajectory:
    """Dense four-state solution record on a uniform grid.

    states[k] and derivatives[k] hold y and dy/dt at grid[k]; together they
    define the cubic Hermite interpolant used by :meth:`sample_at`.
    """

    grid: np.ndarray
    states: np.ndarray
    derivatives: np.ndarray
    step: float

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    def sample_at(self, t: float) -> StateVec:
        """Interpolated state at time t, exact at grid points."""
        row = _sample_rows(self.grid, self.states, self.derivatives, self.step, t)
        return StateVec(float(row[0]), float(row[1]), float(row[2]), float(row[3]))


@dataclass(frozen=True)
class ScalarTrajectory:
    """Dense scalar solution record (single-population test model)."""

    grid: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    step: float

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    def sample_at(self, t: float) -> float:
        return float(
            _sample_rows(self.grid, self.values, self.derivatives, self.step, t)
        )


def _sample_rows(grid, values, derivs, h: float, t: float):
    last = float(grid[-1])
    if not (-1e-9 * h <= t <= last + 1e-9 * h):
        raise DomainError(f"sample time t={t!r} outside [0, {last!r}]")
    k = int(round(t / h))
    if 0 <= k < len(grid) and t == grid[k]:
        return values[k]
    k = min(max(int(math.floor(t / h)), 0), len(grid) - 2)
    th = (t - k * h) / h
    w0, w1, v0, v1 = _hermite_weights(th, h)
    return w0 * values[k] + w1 * values[k + 1] + v0 * derivs[k] + v1 * derivs[k + 1]


def sample_at(traj: Trajectory, t: float) -> StateVec:
    """Module-level alias for :meth:`Trajectory.sample_at`."""
    return traj.sample_at(t)


def _check_run_setup(tau1: float, tau2: float, horizon: float, step: float) -> None:
    if not (math.isfinite(horizon) and math.isfinite(step)) or step <= 0:
        raise ConfigurationError("horizon and step must be finite, step > 0")
    if horizon < step:
        raise ConfigurationError("horizon must be at least one step")
    for tau in (tau1, tau2):
        if tau > 0 and step > tau / 4.0 * (1.0 + 1e-12):
            raise ConfigurationError(
                f"step {step!r} too coarse: need h <= tau/4 = {tau / 4.0!r}"
            )


def _n_steps(horizon: float, step: float) -> int:
    return max(1, int(math.ceil(horizon / step - 1e-9)))


def integrate(
    params: BoomParams,
    history: HistorySpec,
    horizon: float,
    step: float,
) -> Trajectory:
    """Advance the boom model from its constant history over [0, horizon].

    Structural requirements only: finite parameters, 0 <= tau1 < tau2, and
    the step precondition. Sign constraints such as alpha > 0 belong to
    :func:`boomkit.model.validate_params` and are deliberately not enforced
    here so that degenerate academic cases (e.g. all transfer rates zero)
    remain integrable.
    """
    for name in ("alpha", "beta", "gamma", "delta", "epsilon", "zeta", "tau1", "tau2"):
        if not math.isfinite(getattr(params, name)):
            raise ValidationError(f"non-finite parameter {name}")
    if params.tau1 < 0 or not params.tau1 < params.tau2:
        raise ValidationError("delays must satisfy 0 <= tau1 < tau2")
    _check_run_setup(params.tau1, params.tau2, horizon, step)

    h = float(step)
    n = _n_steps(horizon, h)
    y0 = history.initial_state
    y1, y2, y3, y4 = y0.y1, y0.y2, y0.y3, y0.y4

    a = params.alpha
    b = params.beta
    g = params.gamma
    bg = b + g
    d = params.delta
    e = params.epsilon
    z = params.zeta
    t1z = params.tau1 == 0.0
    hist2 = y2  # constant-history value of the delayed column

    # Fixed stencils for the midpoint and endpoint stage reads of each delay.
    if not t1z:
        lim1m, k1m, w1m0, w1m1, v1m0, v1m1 = _stage_stencil(params.tau1, h, 0.5)
        lim1e, k1e, w1e0, w1e1, v1e0, v1e1 = _stage_stencil(params.tau1, h, 1.0)
    lim2m, k2m, w2m0, w2m1, v2m0, v2m1 = _stage_stencil(params.tau2, h, 0.5)
    lim2e, k2e, w2e0, w2e1, v2e0, v2e1 = _stage_stencil(params.tau2, h, 1.0)

    Y1 = [y1]
    Y2 = [y2]
    Y3 = [y3]
    Y4 = [y4]
    F1: list[float] = []
    F2: list[float] = []
    F3: list[float] = []
    F4: list[float] = []

    hh = 0.5 * h
    h6 = h / 6.0
    # Node lags (stage offset 0) equal the previous step's endpoint reads.
    l1n = hist2
    l2n = hist2

    for i in range(n):
        # stage A at the left node; its derivative is also derivatives[i]
        lA1 = y2 if t1z else l1n
        infect = a * y1 * lA1
        adopt = d * y1
        res = e * l2n
        kA1 = -infect - adopt + res + z
        kA2 = infect - bg * y2 + adopt
        kA3 = b * y2 - res - z
        kA4 = g * y2
        F1.append(kA1)
        F2.append(kA2)
        F3.append(kA3)
        F4.append(kA4)

        # time-based delayed reads for the midpoint and endpoint stages
        if not t1z:
            if i <= lim1m:
                l1m = hist2
            else:
                j = i + k1m
                l1m = w1m0 * Y2[j] + w1m1 * Y2[j + 1] + v1m0 * F2[j] + v1m1 * F2[j + 1]
            if i <= lim1e:
                l1e = hist2
            else:
                j = i + k1e
                l1e = w1e0 * Y2[j] + w1e1 * Y2[j + 1] + v1e0 * F2[j] + v1e1 * F2[j + 1]
        if i <= lim2m:
            l2m = hist2
        else:
            j = i + k2m
            l2m = w2m0 * Y2[j] + w2m1 * Y2[j + 1] + v2m0 * F2[j] + v2m1 * F2[j + 1]
        if i <= lim2e:
            l2e = hist2
        else:
            j = i + k2e
            l2e = w2e0 * Y2[j] + w2e1 * Y2[j + 1] + v2e0 * F2[j] + v2e1 * F2[j + 1]

        resm = e * l2m

        # stage B at the midpoint using kA
        u1 = y1 + hh * kA1
        u2 = y2 + hh * kA2
        infect = a * u1 * (u2 if t1z else l1m)
        adopt = d * u1
        kB1 = -infect - adopt + resm + z
        kB2 = infect - bg * u2 + adopt
        kB3 = b * u2 - resm - z
        kB4 = g * u2

        # stage C at the midpoint using kB
        u1 = y1 + hh * kB1
        u2 = y2 + hh * kB2
        infect = a * u1 * (u2 if t1z else l1m)
        adopt = d * u1
        kC1 = -infect - adopt + resm + z
        kC2 = infect - bg * u2 + adopt
        kC3 = b * u2 - resm - z
        kC4 = g * u2

        # stage D at the right node using kC
        u1 = y1 + h * kC1
        u2 = y2 + h * kC2
        rese = e * l2e
        infect = a * u1 * (u2 if t1z else l1e)
        adopt = d * u1
        kD1 = -infect - adopt + rese + z
        kD2 = infect - bg * u2 + adopt
        kD3 = b * u2 - rese - z
        kD4 = g * u2

        y1 = y1 + h6 * (kA1 + 2.0 * (kB1 + kC1) + kD1)
        y2 = y2 + h6 * (kA2 + 2.0 * (kB2 + kC2) + kD2)
        y3 = y3 + h6 * (kA3 + 2.0 * (kB3 + kC3) + kD3)
        y4 = y4 + h6 * (kA4 + 2.0 * (kB4 + kC4) + kD4)
        if not (abs(y1) + abs(y2) + abs(y3) + abs(y4) < _BLOWUP_LIMIT):
            raise DivergenceError((i + 1) * h, "boom state out of bounds")
        Y1.append(y1)
        Y2.append(y2)
        Y3.append(y3)
        Y4.append(y4)
        if not t1z:
            l1n = l1e
        l2n = l2e

    # derivative at the final node (endpoint reads of the last step)
    lA1 = y2 if t1z else l1n
    infect = a * y1 * lA1
    adopt = d * y1
    res = e * l2n
    F1.append(-infect - adopt + res + z)
    F2.append(infect - bg * y2 + adopt)
    F3.append(b * y2 - res - z)
    F4.append(g * y2)

    grid = np.arange(n + 1, dtype=float) * h
    states = np.column_stack(
        [
            np.asarray(Y1, dtype=float),
            np.asarray(Y2, dtype=float),
            np.asarray(Y3, dtype=float),
            np.asarray(Y4, dtype=float),
        ]
    )
    derivs = np.column_stack(
        [
            np.asarray(F1, dtype=float),
            np.asarray(F2, dtype=float),
            np.asarray(F3, dtype=float),
            np.asarray(F4, dtype=float),
        ]
    )
    return Trajectory(grid=grid, states=states, derivatives=derivs, step=h)


def integrate_hutchinson(
    alpha: float,
    K: float,
    tau: float,
    x0: float,
    horizon: float,
    step: float,
) -> ScalarTrajectory:
    """Delayed logistic growth, used as an integrator validation target.

        dx/dt = alpha * x(t) * (1 - x(t - tau) / K)

    Constant history x0 on [-tau, 0]. Below the oscillation threshold
    alpha*tau < pi/2 solutions settle to K; above it they sustain cycles,
    which gives two sharp behavioural checks for the stepping machinery.
    """
    if not (alpha > 0 and K > 0):
        raise ValidationError("hutchinson model requires alpha > 0 and K > 0")
    if tau < 0 or not all(math.isfinite(v) for v in (alpha, K, tau, x0)):
        raise ValidationError("hutchinson inputs must be finite with tau >= 0")
    _check_run_setup(tau, tau, horizon, step)

    h = float(step)
    n = _n_steps(horizon, h)
    x = x0
    tz = tau == 0.0
    if not tz:
        limm, km, wm0, wm1, vm0, vm1 = _stage_stencil(tau, h, 0.5)
        lime, ke, we0, we1, ve0, ve1 = _stage_stencil(tau, h, 1.0)
    X = [x]
    F: list[float] = []
    hh = 0.5 * h
    h6 = h / 6.0
    r = alpha / K
    ln = x0

    for i in range(n):
        kA = alpha * x - r * x * (x if tz else ln)
        F.append(kA)
        if not tz:
            if i <= limm:
                lm = x0
            else:
                j = i + km
                lm = wm0 * X[j] + wm1 * X[j + 1] + vm0 * F[j] + vm1 * F[j + 1]
            if i <= lime:
                le = x0
            else:
                j = i + ke
                le = we0 * X[j] + we1 * X[j + 1] + ve0 * F[j] + ve1 * F[j + 1]
        u = x + hh * kA
        kB = alpha * u - r * u * (u if tz else lm)
        u = x + hh * kB
        kC = alpha * u - r * u * (u if tz else lm)
        u = x + h * kC
        kD = alpha * u - r * u * (u if tz else le)
        x = x + h6 * (kA + 2.0 * (kB + kC) + kD)
        if not (abs(x) < _BLOWUP_LIMIT):
            raise DivergenceError((i + 1) * h, "hutchinson state out of bounds")
        X.append(x)
        if not tz:
            ln = le

    F.append(alpha * x - r * x * (x if tz else ln))
    grid = np.arange(n + 1, dtype=float) * h
    return ScalarTrajectory(
        grid=grid,
        values=np.asarray(X, dtype=float),
        derivatives=np.asarray(F, dtype=float),
        step=h,
    )
