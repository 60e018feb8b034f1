import math

import numpy as np
import pytest

from boomkit.errors import ConfigurationError, DivergenceError, DomainError
from boomkit.integrate import (
    HistorySpec,
    integrate,
    integrate_hutchinson,
    sample_at,
)
from boomkit.model import BoomParams, StateVec


def _params(**kw) -> BoomParams:
    base = dict(alpha=1.0, beta=0.5, gamma=0.5, delta=0.1, epsilon=0.2,
                zeta=0.05, tau1=1.0, tau2=2.0)
    base.update(kw)
    return BoomParams(**base)


DECAY = _params(alpha=0.0, delta=0.0, epsilon=0.0, zeta=0.0)  # y2' = -y2


class TestBoomIntegration:
    def test_exponential_decay(self):
        traj = integrate(DECAY, HistorySpec(StateVec(0, 1.0, 0, 0)), 5.0, 0.01)
        assert traj.sample_at(5.0).y2 == pytest.approx(math.exp(-5.0), abs=1e-8)

    def test_population_conserved(self, worked_params, boom_start):
        traj = integrate(worked_params, HistorySpec(boom_start), 100.0, 0.01)
        totals = traj.states.sum(axis=1)
        scale = sum(abs(v) for v in boom_start.as_tuple())
        assert np.abs(totals - totals[0]).max() <= 1e-6 * scale

    def test_perturbed_equilibrium_returns(self, worked_params):
        # E1 = (0.05/0.13, 0.0625); kick y2 by 0.01 and integrate long
        y1s, y2s = 0.05 / 0.13, 0.0625
        start = StateVec(y1s, y2s + 0.01, 0.0, 0.0)
        traj = integrate(worked_params, HistorySpec(start), 200.0, 0.05)
        end = traj.sample_at(200.0)
        assert math.hypot(end.y1 - y1s, end.y2 - y2s) < 1e-4

    def test_deterministic(self, worked_params, boom_start):
        a = integrate(worked_params, HistorySpec(boom_start), 30.0, 0.05)
        b = integrate(worked_params, HistorySpec(boom_start), 30.0, 0.05)
        assert np.array_equal(a.states, b.states)
        assert np.array_equal(a.derivatives, b.derivatives)

    def test_step_refinement_order(self, worked_params, boom_start):
        # successive halvings shrink the change by ~2^4; require order >= 3
        ends = [
            integrate(worked_params, HistorySpec(boom_start), 10.0, h).sample_at(10.0).y2
            for h in (0.2, 0.1, 0.05)
        ]
        d1 = abs(ends[1] - ends[0])
        d2 = abs(ends[2] - ends[1])
        assert d2 < d1
        assert d1 / d2 >= 8.0

    def test_step_too_coarse_refused(self, worked_params, boom_start):
        with pytest.raises(ConfigurationError, match="too coarse"):
            integrate(worked_params, HistorySpec(boom_start), 10.0, 0.3)

    def test_horizon_shorter_than_step_refused(self, worked_params, boom_start):
        with pytest.raises(ConfigurationError):
            integrate(worked_params, HistorySpec(boom_start), 0.01, 0.05)

    def test_divergence_reports_time(self):
        p = _params(alpha=10.0, beta=0.0, gamma=0.0, delta=1.0)
        big = StateVec(1e6, 1e6, 0.0, 0.0)
        with pytest.raises(DivergenceError) as err:
            integrate(p, HistorySpec(big), 50.0, 0.01)
        assert err.value.time > 0.0

    def test_zero_tau1_allowed(self, boom_start):
        p = _params(tau1=0.0, tau2=2.0)
        traj = integrate(p, HistorySpec(boom_start), 10.0, 0.05)
        assert np.isfinite(traj.states).all()

    def test_uniform_grid(self, worked_params, boom_start):
        traj = integrate(worked_params, HistorySpec(boom_start), 7.3, 0.05)
        gaps = np.diff(traj.grid)
        assert np.abs(gaps - 0.05).max() <= 1e-9 * 0.05
        assert traj.horizon >= 7.3

    def test_stored_derivatives_match_rhs(self, worked_params, boom_start):
        # the derivative columns must agree with the public rhs fed by the
        # trajectory's own delayed lookups
        from boomkit.model import StateVec, rhs

        p = worked_params
        traj = integrate(p, HistorySpec(boom_start), 12.0, 0.05)
        hist = boom_start
        for k in (0, 7, 40, 120, len(traj.grid) - 1):
            t = float(traj.grid[k])
            lag1 = traj.sample_at(t - p.tau1) if t - p.tau1 > 0 else hist
            lag2 = traj.sample_at(t - p.tau2) if t - p.tau2 > 0 else hist
            state = StateVec(*traj.states[k])
            expect = rhs(state, lag1, lag2, p)
            got = traj.derivatives[k]
            for i, comp in enumerate(expect.as_tuple()):
                assert got[i] == pytest.approx(comp, rel=1e-12, abs=1e-14)


class TestSampleAt:
    def test_grid_points_exact(self, worked_params, boom_start):
        traj = integrate(worked_params, HistorySpec(boom_start), 10.0, 0.05)
        for k in (0, 1, 57, len(traj.grid) - 1):
            got = traj.sample_at(float(traj.grid[k]))
            assert got.as_tuple() == tuple(traj.states[k])

    def test_constant_solution_interpolates_constant(self):
        p = _params(alpha=0.0, beta=0.0, gamma=0.0, delta=0.0, epsilon=0.0, zeta=0.0)
        traj = integrate(p, HistorySpec(StateVec(0.3, 0.7, 0.1, 0.2)), 5.0, 0.05)
        for t in (0.013, 1.77, 4.999):
            assert traj.sample_at(t).as_tuple() == pytest.approx((0.3, 0.7, 0.1, 0.2), abs=1e-14)

    def test_mid_interval_matches_analytic_decay(self):
        traj = integrate(DECAY, HistorySpec(StateVec(0, 1.0, 0, 0)), 5.0, 0.01)
        for t in (0.005, 1.2345, 3.6789):
            assert traj.sample_at(t).y2 == pytest.approx(math.exp(-t), abs=1e-8)

    def test_out_of_range_raises(self, worked_params, boom_start):
        traj = integrate(worked_params, HistorySpec(boom_start), 5.0, 0.05)
        with pytest.raises(DomainError):
            traj.sample_at(-0.5)
        with pytest.raises(DomainError):
            traj.sample_at(traj.horizon + 1.0)

    def test_module_level_alias(self, worked_params, boom_start):
        traj = integrate(worked_params, HistorySpec(boom_start), 5.0, 0.05)
        assert sample_at(traj, 2.5) == traj.sample_at(2.5)


class TestHutchinson:
    def test_delay_free_logistic(self):
        traj = integrate_hutchinson(1.0, 1.0, 0.0, 0.5, 10.0, 0.01)
        assert traj.sample_at(10.0) == pytest.approx(1.0 / (1.0 + math.exp(-10.0)), abs=1e-6)

    def test_below_threshold_settles(self):
        # alpha*tau = 0.3 < pi/2: monotone-ish approach to K
        traj = integrate_hutchinson(1.0, 1.0, 0.3, 0.5, 200.0, 0.05)
        assert abs(traj.sample_at(200.0) - 1.0) <= 1e-3

    def test_above_threshold_oscillates(self):
        # alpha*tau = 2.0 > pi/2: sustained cycles
        traj = integrate_hutchinson(1.0, 1.0, 2.0, 0.5, 200.0, 0.02)
        window = traj.values[traj.grid >= 150.0]
        assert window.max() - window.min() > 0.1

    def test_invalid_rates_refused(self):
        from boomkit.errors import ValidationError

        with pytest.raises(ValidationError):
            integrate_hutchinson(0.0, 1.0, 0.3, 0.5, 10.0, 0.05)
        with pytest.raises(ValidationError):
            integrate_hutchinson(1.0, -1.0, 0.3, 0.5, 10.0, 0.05)

    def test_history_constant_before_start(self):
        # with x0 = K the solution is the constant K for all time
        traj = integrate_hutchinson(1.0, 1.0, 0.5, 1.0, 20.0, 0.05)
        assert np.abs(traj.values - 1.0).max() <= 1e-12
