"""Analyst-driven parameter-estimation sessions.

A session walks the estimation loop for one observed series:

1. seed starting values for the free rates,
2. take heuristic starting values for zeta and the two delays from the
   data (:func:`initial_guesses`),
3. sample the rates with the random-walk chain (20,000 iterations by
   default),
4. report the fit (R2, RMSE, overlay) for visual review,
5. optionally adjust zeta/tau1/tau2 by hand,
6. repeat 3-5 until satisfied, then finalize.

Because step 4 is a human judgement, :func:`pes_iterate` stops in
``AWAITING_REVIEW`` after each round instead of auto-looping; the CLI and
the web UI surface the overlay for inspection. :func:`finalize` picks the
logged round with the best R2 (first wins on ties) and freezes the session.
The stability verdict is shown on every report but never gates selection:
plenty of good fits land in the Inconclusive region of the sufficient test.
"""

from __future__ import annotations

import enum
import time
import uuid
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ValidationError
from .goodness import ObservedSeries, PredictedSeries, r_squared, rmse
from .inference import (
    FixedContext,
    PosteriorSummary,
    ThetaFree,
    default_scales,
    make_params,
    posterior_summary,
    predict_observable,
    run_chain,
)
from .model import BoomParams, StateVec
from .stability import StabilityVerdict, Verdict, check_theorem1

__all__ = [
    "InitialGuesses",
    "McmcSettings",
    "FitReport",
    "IterationEntry",
    "SessionStatus",
    "PesSession",
    "initial_guesses",
    "new_session",
    "fit_once",
    "pes_iterate",
    "finalize",
]


@dataclass(frozen=True)
class InitialGuesses:
    """Heuristic starting values read off the raw series."""

    zeta0: float
    tau1_0: float
    tau2_0: float
    fallback: bool  # True when no interior peak existed and span/4 was used


def _local_maxima(values: np.ndarray) -> list[int]:
    """Indices of strict interior local maxima."""
    return [
        i
        for i in range(1, len(values) - 1)
        if values[i] > values[i - 1] and values[i] > values[i + 1]
    ]


def _smooth3(values: np.ndarray) -> np.ndarray:
    """3-point moving average with clamped ends."""
    out = values.astype(float).copy()
    out[1:-1] = (values[:-2] + values[1:-1] + values[2:]) / 3.0
    return out


def initial_guesses(observed: ObservedSeries, smooth: bool = False) -> InitialGuesses:
    """Starting zeta and delays from the peak structure of the data.

    zeta starts at 5% of the peak count. tau1 is the time from the series
    start to the first strict local maximum; tau2 the time from that maximum
    to the largest later maximum, or twice tau1 when no later peak exists.
    tau2 is nudged up whenever the peak spacing would violate tau1 < tau2.
    A series with no interior peak at all (e.g. monotone decline) falls back
    to tau1 = span/4 and sets the fallback flag.
    """
    values = _smooth3(observed.values) if smooth else observed.values
    times = observed.times
    zeta0 = 0.05 * float(observed.values.max())
    span = float(times[-1] - times[0])

    maxima = _local_maxima(values)
    if not maxima:
        tau1_0 = span / 4.0
        return InitialGuesses(zeta0, tau1_0, 2.0 * tau1_0, fallback=True)

    first = maxima[0]
    tau1_0 = float(times[first] - times[0])
    later = maxima[1:]
    if later:
        biggest = max(later, key=lambda i: values[i])
        tau2_0 = float(times[biggest] - times[first])
    else:
        tau2_0 = 2.0 * tau1_0
    if tau2_0 <= tau1_0:
        tau2_0 = 2.0 * tau1_0
    return InitialGuesses(zeta0, tau1_0, tau2_0, fallback=False)


@dataclass(frozen=True)
class McmcSettings:
    """Per-round sampler settings; scales default to 5% of the start values."""

    n_iter: int = 20000
    burn_in: int = 5000
    scales: np.ndarray | None = None
    seed: int | None = None  # None: session seed + round index

    def __post_init__(self) -> None:
        if not (0 <= self.burn_in <= self.n_iter):
            raise ConfigurationError("need n_iter >= burn_in >= 0")


@dataclass(frozen=True)
class FitReport:
    """One round's outcome: parameters, fit quality, stability, overlay."""

    params: BoomParams
    r2: float
    rmse: float
    stability: StabilityVerdict
    times: np.ndarray
    observed: np.ndarray
    predicted: np.ndarray
    summary: PosteriorSummary
    n_iter: int
    burn_in: int
    seed: int
    initial_state: StateVec
    sigma_obs: float
    step: float


@dataclass(frozen=True)
class IterationEntry:
    index: int
    adjustment: dict[str, float]  # zeta/tau1/tau2 in force for this round
    report: FitReport
    timestamp: float


class SessionStatus(enum.Enum):
    DRAFT = "Draft"
    RUNNING = "Running"
    AWAITING_REVIEW = "AwaitingReview"
    FINALIZED = "Finalized"


@dataclass
class PesSession:
    """Mutable estimation session; the iteration log is append-only."""

    observed: ObservedSeries
    theta: ThetaFree
    zeta: float
    tau1: float
    tau2: float
    initial_state: StateVec
    sigma_obs: float
    step: float
    seed: int
    guesses: InitialGuesses
    iterations: list[IterationEntry] = field(default_factory=list)
    status: SessionStatus = SessionStatus.DRAFT
    session_id: str = field(default_factory=lambda: uuid.uuid4().hex)


def new_session(
    observed: ObservedSeries,
    theta_init: ThetaFree,
    initial_state: StateVec,
    sigma_obs: float | None = None,
    step: float = 0.05,
    seed: int = 0,
    smooth_peaks: bool = False,
) -> PesSession:
    """Create a Draft session seeded from the data heuristics.

    sigma_obs defaults to 10% of the largest observed count.
    """
    guesses = initial_guesses(observed, smooth=smooth_peaks)
    if sigma_obs is None:
        sigma_obs = 0.1 * float(observed.values.max())
        if sigma_obs <= 0:
            sigma_obs = 1.0
    return PesSession(
        observed=observed,
        theta=theta_init,
        zeta=guesses.zeta0,
        tau1=guesses.tau1_0,
        tau2=guesses.tau2_0,
        initial_state=initial_state,
        sigma_obs=sigma_obs,
        step=step,
        seed=seed,
        guesses=guesses,
    )


def fit_once(
    observed: ObservedSeries,
    theta_init: ThetaFree,
    fixed: FixedContext,
    settings: McmcSettings,
    seed: int,
    progress=None,
) -> FitReport:
    """Run one chain and assemble the full report at the posterior mean."""
    scales = settings.scales
    if scales is None:
        scales = default_scales(theta_init)
    chain = run_chain(
        theta_init,
        settings.n_iter,
        settings.burn_in,
        scales,
        fixed,
        observed,
        seed,
        progress=progress,
    )
    summary = posterior_summary(chain, settings.burn_in)
    theta_hat = summary.means()
    params = make_params(theta_hat, fixed)
    predicted = predict_observable(
        params, fixed.initial_state, observed.times, fixed.step
    )
    pred_series = PredictedSeries(predicted)
    verdict = (
        check_theorem1(params)
        if fixed.zeta != 0.0
        else StabilityVerdict(verdict=Verdict.INCONCLUSIVE)
    )
    return FitReport(
        params=params,
        r2=r_squared(observed, pred_series),
        rmse=rmse(observed, pred_series),
        stability=verdict,
        times=observed.times.copy(),
        observed=observed.values.copy(),
        predicted=predicted,
        summary=summary,
        n_iter=settings.n_iter,
        burn_in=settings.burn_in,
        seed=seed,
        initial_state=fixed.initial_state,
        sigma_obs=fixed.sigma_obs,
        step=fixed.step,
    )


def _build_report(
    session: PesSession, settings: McmcSettings, seed: int, progress=None
) -> FitReport:
    fixed = FixedContext(
        zeta=session.zeta,
        tau1=session.tau1,
        tau2=session.tau2,
        initial_state=session.initial_state,
        sigma_obs=session.sigma_obs,
        step=session.step,
    )
    return fit_once(
        session.observed, session.theta, fixed, settings, seed, progress=progress
    )


def pes_iterate(
    session: PesSession,
    adjustment: dict[str, float] | None = None,
    settings: McmcSettings | None = None,
    progress=None,
) -> PesSession:
    """Apply an optional zeta/tau adjustment, run one chain, log the report.

    A rejected adjustment (delay ordering violated, unknown key) leaves the
    session untouched. On success the session's rate estimate moves to the
    posterior mean and the status becomes AwaitingReview.
    """
    if session.status is SessionStatus.FINALIZED:
        raise ValidationError("session is finalized and immutable")
    settings = settings or McmcSettings()

    zeta, tau1, tau2 = session.zeta, session.tau1, session.tau2
    if adjustment:
        unknown = set(adjustment) - {"zeta", "tau1", "tau2"}
        if unknown:
            raise ValidationError(f"unknown adjustment keys: {sorted(unknown)}")
        zeta = float(adjustment.get("zeta", zeta))
        tau1 = float(adjustment.get("tau1", tau1))
        tau2 = float(adjustment.get("tau2", tau2))
        if not (0 <= tau1 < tau2):
            raise ValidationError(
                f"adjustment rejected: need 0 <= tau1 < tau2, got ({tau1}, {tau2})"
            )
    session.zeta, session.tau1, session.tau2 = zeta, tau1, tau2

    seed = settings.seed
    if seed is None:
        seed = session.seed + len(session.iterations)

    prior_status = session.status
    session.status = SessionStatus.RUNNING
    try:
        report = _build_report(session, settings, seed, progress=progress)
    except Exception:
        session.status = prior_status
        raise
    entry = IterationEntry(
        index=len(session.iterations),
        adjustment={"zeta": zeta, "tau1": tau1, "tau2": tau2},
        report=report,
        timestamp=time.time(),
    )
    session.iterations.append(entry)
    session.theta = report.summary.means()
    session.status = SessionStatus.AWAITING_REVIEW
    return session


def finalize(session: PesSession) -> FitReport:
    """Freeze the session and return the best-R2 round (first wins ties).

    Idempotent: finalizing a finalized session returns the same report.
    """
    if not session.iterations:
        raise ConfigurationError("cannot finalize a session with no iterations")
    best = max(session.iterations, key=lambda e: (e.report.r2, -e.index))
    session.status = SessionStatus.FINALIZED
    return best.report
