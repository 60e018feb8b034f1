"""Posterior over the five free rates and a random-walk sampler for it.

The fit holds (zeta, tau1, tau2) and the initial state fixed, treats the
observed counts as the on-boom level y2 read at the observation times, and
scores a candidate (alpha, beta, gamma, delta, epsilon) with independent
Gaussian observation noise of user-set width sigma_obs:

    log_posterior = -sum_i (Y_i - y2(t_i))^2 / (2 * sigma_obs^2)

up to an additive constant, under flat (improper) priors on the support box
{alpha > 0, beta + gamma > 0, delta > 0} with epsilon unconstrained.
Candidates outside the box, and candidates whose simulation blows up, score
-inf and so are never accepted.

The sampler is a plain random-walk Metropolis-Hastings with fixed
per-coordinate proposal widths and no adaptation; chains are strictly
sequential and fully determined by their seed. Note that the observable y2
depends on beta and gamma only through their sum, so the pair is a flat
ridge of the posterior: individual beta/gamma marginals are pinned by the
starting point and the proposal width rather than by the data. Keep
proposal widths modest when per-component estimates matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DivergenceError, ValidationError
from .goodness import ObservedSeries
from .integrate import HistorySpec, integrate
from .model import BoomParams, StateVec

__all__ = [
    "THETA_NAMES",
    "ThetaFree",
    "FixedContext",
    "Chain",
    "ParamStats",
    "PosteriorSummary",
    "default_scales",
    "make_params",
    "predict_observable",
    "log_posterior",
    "make_log_posterior",
    "mh_step",
    "run_chain",
    "posterior_summary",
]

THETA_NAMES = ("alpha", "beta", "gamma", "delta", "epsilon")


@dataclass(frozen=True)
class ThetaFree:
    """The five rates explored by the sampler."""

    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.alpha, self.beta, self.gamma, self.delta, self.epsilon],
            dtype=float,
        )

    @staticmethod
    def from_array(vec: np.ndarray) -> "ThetaFree":
        return ThetaFree(*(float(v) for v in vec))

    def in_support(self) -> bool:
        vals = (self.alpha, self.beta, self.gamma, self.delta, self.epsilon)
        if not all(math.isfinite(v) for v in vals):
            return False
        return self.alpha > 0 and self.beta + self.gamma > 0 and self.delta > 0


@dataclass(frozen=True)
class FixedContext:
    """Everything the likelihood needs besides the sampled rates."""

    zeta: float
    tau1: float
    tau2: float
    initial_state: StateVec
    sigma_obs: float
    step: float

    def __post_init__(self) -> None:
        if not self.sigma_obs > 0:
            raise ValidationError("sigma_obs must be > 0")
        if not self.step > 0:
            raise ValidationError("integration step must be > 0")
        if self.tau1 < 0 or not self.tau1 < self.tau2:
            raise ValidationError("delays must satisfy 0 <= tau1 < tau2")


def make_params(theta: ThetaFree, fixed: FixedContext) -> BoomParams:
    return BoomParams(
        alpha=theta.alpha,
        beta=theta.beta,
        gamma=theta.gamma,
        delta=theta.delta,
        epsilon=theta.epsilon,
        zeta=fixed.zeta,
        tau1=fixed.tau1,
        tau2=fixed.tau2,
    )


def predict_observable(
    params: BoomParams,
    initial_state: StateVec,
    times: np.ndarray,
    step: float,
) -> np.ndarray:
    """Simulate and read y2 at the requested times (the model's F_i)."""
    times = np.asarray(times, dtype=float)
    if times[0] < 0:
        raise ValidationError("observation times must be non-negative")
    horizon = max(float(times[-1]), step)
    traj = integrate(params, HistorySpec(initial_state), horizon, step)
    return np.array([traj.sample_at(float(t)).y2 for t in times])


def log_posterior(
    theta: ThetaFree, fixed: FixedContext, observed: ObservedSeries
) -> float:
    """Gaussian log-posterior up to a constant; -inf off-support or on blow-up."""
    if not theta.in_support():
        return -math.inf
    try:
        predicted = predict_observable(
            make_params(theta, fixed), fixed.initial_state, observed.times, fixed.step
        )
    except DivergenceError:
        return -math.inf
    resid = observed.values - predicted
    return -float((resid * resid).sum()) / (2.0 * fixed.sigma_obs * fixed.sigma_obs)


def make_log_posterior(fixed: FixedContext, observed: ObservedSeries):
    """Closure over the data mapping a raw 5-vector to its log-posterior."""

    def target(vec: np.ndarray) -> float:
        return log_posterior(ThetaFree.from_array(vec), fixed, observed)

    return target


def _accept(rng: np.random.Generator, delta_lp: float) -> bool:
    """Metropolis accept/reject with acceptance probability min(1, exp(delta))."""
    u = float(rng.random())
    if math.isnan(delta_lp):  # both endpoints impossible: stay put
        return False
    if u == 0.0:
        return delta_lp > -math.inf
    return math.log(u) < delta_lp


def mh_step(
    current: np.ndarray,
    current_lp: float,
    rng: np.random.Generator,
    scales: np.ndarray,
    target,
) -> tuple[np.ndarray, float, bool]:
    """One random-walk step: Gaussian proposal, Metropolis acceptance.

    Returns (next_state, next_lp, accepted); on rejection the current state
    is handed back unchanged. Draws exactly two variates per call (proposal
    and acceptance) so chains are reproducible from the seed alone.
    """
    proposal = rng.normal(current, scales)
    proposal_lp = float(target(proposal))
    if _accept(rng, proposal_lp - current_lp):
        return proposal, proposal_lp, True
    return current, current_lp, False


@dataclass(frozen=True)
class Chain:
    """A finished run: row 0 is the starting point, rows 1..n the steps."""

    samples: np.ndarray  # (n_iter + 1, 5)
    log_posteriors: np.ndarray  # (n_iter + 1,)
    accepted: np.ndarray  # (n_iter + 1,) bool; index 0 is True by convention
    proposal_scales: np.ndarray  # (5,)
    seed: int

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def acceptance_rate(self) -> float:
        if len(self.samples) <= 1:
            return 0.0
        return float(self.accepted[1:].mean())


def default_scales(init: ThetaFree, fraction: float = 0.05) -> np.ndarray:
    """Per-parameter proposal widths: a fraction of each starting value.

    Zero-valued components fall back to an absolute width of 0.01 so the
    coordinate still moves.
    """
    vec = np.abs(init.as_array()) * fraction
    return np.where(vec > 0, vec, 0.01)


def run_chain(
    init: ThetaFree,
    n_iter: int,
    burn_in: int,
    scales: np.ndarray,
    fixed: FixedContext,
    observed: ObservedSeries,
    seed: int,
    progress=None,
) -> Chain:
    """Run n_iter sequential steps from init; deterministic given seed.

    ``progress``, when given, is called as progress(done, total) roughly a
    hundred times over the run (long fits report through this hook).
    """
    if not (0 <= burn_in <= n_iter):
        raise ConfigurationError("need n_iter >= burn_in >= 0")
    if not init.in_support():
        raise ConfigurationError("chain start violates the prior support")
    scales = np.asarray(scales, dtype=float)
    if scales.shape != (len(THETA_NAMES),) or not np.all(scales > 0):
        raise ConfigurationError("proposal scales must be 5 positive numbers")

    target = make_log_posterior(fixed, observed)
    rng = np.random.default_rng(seed)
    cur = init.as_array()
    cur_lp = float(target(cur))

    samples = np.empty((n_iter + 1, len(THETA_NAMES)), dtype=float)
    lps = np.empty(n_iter + 1, dtype=float)
    flags = np.zeros(n_iter + 1, dtype=bool)
    samples[0] = cur
    lps[0] = cur_lp
    flags[0] = True

    tick = max(1, n_iter // 100)
    for k in range(1, n_iter + 1):
        cur, cur_lp, ok = mh_step(cur, cur_lp, rng, scales, target)
        samples[k] = cur
        lps[k] = cur_lp
        flags[k] = ok
        if progress is not None and (k % tick == 0 or k == n_iter):
            progress(k, n_iter)

    return Chain(
        samples=samples,
        log_posteriors=lps,
        accepted=flags,
        proposal_scales=scales,
        seed=int(seed),
    )


@dataclass(frozen=True)
class ParamStats:
    mean: float
    std: float
    lo95: float
    hi95: float


@dataclass(frozen=True)
class PosteriorSummary:
    params: dict[str, ParamStats]
    acceptance_rate: float
    burn_in: int

    def means(self) -> ThetaFree:
        return ThetaFree(*(self.params[name].mean for name in THETA_NAMES))


def posterior_summary(chain: Chain, burn_in: int) -> PosteriorSummary:
    """Moments and central 95% intervals over the post-burn-in samples."""
    if not (0 <= burn_in < len(chain)):
        raise ConfigurationError(
            f"burn_in {burn_in} leaves no samples (chain length {len(chain)})"
        )
    seg = chain.samples[burn_in:]
    stats: dict[str, ParamStats] = {}
    for i, name in enumerate(THETA_NAMES):
        col = seg[:, i]
        lo, hi = np.percentile(col, [2.5, 97.5])
        stats[name] = ParamStats(
            mean=float(col.mean()),
            std=float(col.std()),
            lo95=float(lo),
            hi95=float(hi),
        )
    return PosteriorSummary(
        params=stats, acceptance_rate=chain.acceptance_rate, burn_in=int(burn_in)
    )
