"""File formats: observed-series CSV, key=value run configs, JSON documents.

One document schema serves both the files written by the CLI and the HTTP
payloads served to the UI. All numbers round-trip bit-exactly through JSON
(Python emits shortest round-trip float literals), which the determinism
tests rely on.

Series files are UTF-8 CSV with the exact header ``t,value``; times are in
whatever unit the analyst declares (days for typical social-media counts)
and must increase strictly. Configs are flat ``key = value`` lines with
``#`` comments; unknown keys are rejected rather than ignored so typos
surface immediately.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .goodness import ObservedSeries
from .inference import THETA_NAMES, ParamStats, PosteriorSummary, ThetaFree
from .model import BoomParams, StateVec
from .pes import (
    FitReport,
    InitialGuesses,
    IterationEntry,
    PesSession,
    SessionStatus,
)
from .stability import CONDITION_KEYS, StabilityVerdict, Verdict

__all__ = [
    "RunConfig",
    "load_series",
    "parse_series_text",
    "load_config",
    "build_config",
    "parse_kv_text",
    "emit_report",
    "load_report",
    "report_to_doc",
    "report_from_doc",
    "session_to_doc",
    "session_from_doc",
    "trajectory_table",
    "R2_NOTE",
]

R2_NOTE = (
    "R2 uses centered residuals: it is invariant under constant offsets of "
    "the prediction and can be negative for poor fits (it is not the "
    "textbook uncentered definition)."
)


# ---------------------------------------------------------------------------
# observed series


def parse_series_text(
    text: str, label: str = "", normalize: bool = False
) -> ObservedSeries:
    """Parse ``t,value`` CSV content into an ObservedSeries."""
    lines = text.splitlines()
    if not lines or lines[0].strip().lower() != "t,value":
        raise ParseError("series file must start with header 't,value'", line=1)
    times: list[float] = []
    values: list[float] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        row = raw.strip()
        if not row:
            continue
        parts = row.split(",")
        if len(parts) != 2:
            raise ParseError(
                f"line {lineno}: expected 't,value', got {row!r}", line=lineno
            )
        try:
            t = float(parts[0])
            v = float(parts[1])
        except ValueError:
            raise ParseError(
                f"line {lineno}: non-numeric field in {row!r}", line=lineno
            ) from None
        if not (math.isfinite(t) and math.isfinite(v)):
            raise ParseError(f"line {lineno}: non-finite value", line=lineno)
        if v < 0:
            raise ParseError(f"line {lineno}: negative count {v!r}", line=lineno)
        if times:
            if t == times[-1]:
                raise ParseError(f"line {lineno}: duplicate timestamp {t!r}", line=lineno)
            if t < times[-1]:
                raise ParseError(
                    f"line {lineno}: time {t!r} not increasing", line=lineno
                )
        elif t < 0:
            raise ParseError(f"line {lineno}: negative start time {t!r}", line=lineno)
        times.append(t)
        values.append(v)
    if len(times) < 3:
        raise ValidationError("observed series needs at least 3 points")
    scale = 1.0
    arr = np.asarray(values, dtype=float)
    if normalize:
        scale = float(arr.max())
        if scale <= 0:
            raise ValidationError("cannot peak-normalize an all-zero series")
        arr = arr / scale
    return ObservedSeries(
        times=np.asarray(times, dtype=float), values=arr, label=label, scale=scale
    )


def load_series(path: str | Path, normalize: bool = False) -> ObservedSeries:
    path = Path(path)
    return parse_series_text(
        path.read_text(encoding="utf-8"), label=path.stem, normalize=normalize
    )


# ---------------------------------------------------------------------------
# run configuration

_FLOAT_KEYS = {
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "tau1", "tau2",
    "y1_0", "y2_0", "y3_0", "y4_0", "step", "horizon", "sigma_obs",
    "proposal_frac", "scale_alpha", "scale_beta", "scale_gamma",
    "scale_delta", "scale_epsilon",
}
_INT_KEYS = {"n_iter", "burn_in", "seed"}
_BOOL_KEYS = {"normalize"}
_STR_KEYS = {"data"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; see the README for the key-by-key story."""

    data: str | None = None
    alpha: float = 1.0
    beta: float = 0.5
    gamma: float = 0.5
    delta: float = 0.1
    epsilon: float = 0.2
    zeta: float = 0.05
    tau1: float = 1.0
    tau2: float = 2.0
    y1_0: float = 1.0
    y2_0: float = 0.01
    y3_0: float = 0.0
    y4_0: float = 0.0
    step: float = 0.05
    horizon: float = 100.0
    sigma_obs: float | None = None
    n_iter: int = 20000
    burn_in: int = 5000
    seed: int = 0
    proposal_frac: float = 0.05
    scale_alpha: float | None = None
    scale_beta: float | None = None
    scale_gamma: float | None = None
    scale_delta: float | None = None
    scale_epsilon: float | None = None
    normalize: bool = False

    def params(self) -> BoomParams:
        return BoomParams(
            alpha=self.alpha, beta=self.beta, gamma=self.gamma, delta=self.delta,
            epsilon=self.epsilon, zeta=self.zeta, tau1=self.tau1, tau2=self.tau2,
        )

    def theta(self) -> ThetaFree:
        return ThetaFree(self.alpha, self.beta, self.gamma, self.delta, self.epsilon)

    def initial_state(self) -> StateVec:
        return StateVec(self.y1_0, self.y2_0, self.y3_0, self.y4_0)

    def scales_vec(self) -> np.ndarray:
        explicit = (self.scale_alpha, self.scale_beta, self.scale_gamma,
                    self.scale_delta, self.scale_epsilon)
        init = self.theta().as_array()
        out = np.empty(len(THETA_NAMES))
        for i, (exp, v) in enumerate(zip(explicit, init)):
            if exp is not None:
                out[i] = exp
            elif v != 0:
                out[i] = self.proposal_frac * abs(v)
            else:
                out[i] = 0.01
        return out

    def resolve_sigma(self, observed: ObservedSeries) -> float:
        if self.sigma_obs is not None:
            return self.sigma_obs
        peak = float(observed.values.max())
        return 0.1 * peak if peak > 0 else 1.0


def parse_kv_text(text: str) -> dict[str, str]:
    """Flat key=value lines, '#' comments, later keys win."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value'", line=lineno)
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _coerce(key: str, raw: str):
    if key not in _ALL_KEYS:
        raise ParseError(f"unknown key '{key}'")
    if key in _STR_KEYS:
        return raw
    if key in _BOOL_KEYS:
        low = raw.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ParseError(f"key '{key}': expected a boolean, got {raw!r}")
    try:
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError:
        kind = "an integer" if key in _INT_KEYS else "a number"
        raise ParseError(f"key '{key}': expected {kind}, got {raw!r}") from None


def build_config(mapping: dict[str, str]) -> RunConfig:
    """Coerce and validate a raw key->string mapping into a RunConfig."""
    kwargs = {}
    for key, raw in mapping.items():
        kwargs[key] = _coerce(key, raw)
    cfg = RunConfig(**kwargs)
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: RunConfig) -> None:
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if isinstance(v, float) and not math.isfinite(v):
            raise ValidationError(f"key '{f.name}': must be finite")
    if cfg.tau1 < 0:
        raise ValidationError("key 'tau1': tau1 >= 0 required")
    if not cfg.tau1 < cfg.tau2:
        raise ValidationError("keys 'tau1'/'tau2': tau1 < tau2 required")
    if not cfg.step > 0:
        raise ValidationError("key 'step': must be > 0")
    if not cfg.horizon > 0:
        raise ValidationError("key 'horizon': must be > 0")
    if cfg.n_iter < 0 or cfg.burn_in < 0 or cfg.n_iter < cfg.burn_in:
        raise ValidationError("keys 'n_iter'/'burn_in': need n_iter >= burn_in >= 0")
    if cfg.sigma_obs is not None and not cfg.sigma_obs > 0:
        raise ValidationError("key 'sigma_obs': must be > 0")
    if not cfg.proposal_frac > 0:
        raise ValidationError("key 'proposal_frac': must be > 0")
    for name in ("scale_alpha", "scale_beta", "scale_gamma", "scale_delta",
                 "scale_epsilon"):
        v = getattr(cfg, name)
        if v is not None and not v > 0:
            raise ValidationError(f"key '{name}': must be > 0")


def load_config(path: str | Path, overrides: dict[str, str] | None = None) -> RunConfig:
    """Parse a config file, apply overrides, then validate."""
    mapping = parse_kv_text(Path(path).read_text(encoding="utf-8"))
    if overrides:
        mapping.update(overrides)
    return build_config(mapping)


# ---------------------------------------------------------------------------
# documents (reports, sessions)


_PARAM_KEYS = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta", "tau1", "tau2")


def _params_doc(p: BoomParams) -> dict:
    return {k: getattr(p, k) for k in _PARAM_KEYS}


def _params_from_doc(doc: dict) -> BoomParams:
    return BoomParams(**{k: float(doc[k]) for k in _PARAM_KEYS})


def verdict_to_doc(v: StabilityVerdict) -> dict:
    return {
        "verdict": v.verdict.value,
        "conditions": {k: v.conditions.get(k) for k in CONDITION_KEYS},
        "quantities": dict(v.quantities),
    }


def verdict_from_doc(doc: dict) -> StabilityVerdict:
    return StabilityVerdict(
        verdict=Verdict(doc["verdict"]),
        conditions={k: doc["conditions"].get(k) for k in CONDITION_KEYS},
        quantities=dict(doc.get("quantities", {})),
    )


def _summary_doc(s: PosteriorSummary) -> dict:
    return {
        "acceptance_rate": s.acceptance_rate,
        "burn_in": s.burn_in,
        "posterior": {
            name: {
                "mean": st.mean, "std": st.std, "lo95": st.lo95, "hi95": st.hi95,
            }
            for name, st in s.params.items()
        },
    }


def _summary_from_doc(doc: dict) -> PosteriorSummary:
    return PosteriorSummary(
        params={
            name: ParamStats(
                mean=float(d["mean"]), std=float(d["std"]),
                lo95=float(d["lo95"]), hi95=float(d["hi95"]),
            )
            for name, d in doc["posterior"].items()
        },
        acceptance_rate=float(doc["acceptance_rate"]),
        burn_in=int(doc["burn_in"]),
    )


def report_to_doc(report: FitReport) -> dict:
    return {
        "kind": "fit_report",
        "params": _params_doc(report.params),
        "fit": {"r2": report.r2, "rmse": report.rmse, "r2_note": R2_NOTE,
                "selection_rule": "max_r2"},
        "stability": verdict_to_doc(report.stability),
        "overlay": {
            "t": [float(x) for x in report.times],
            "observed": [float(x) for x in report.observed],
            "predicted": [float(x) for x in report.predicted],
        },
        "chain": {
            "n_iter": report.n_iter,
            "burn_in": report.burn_in,
            "seed": report.seed,
            **_summary_doc(report.summary),
        },
        "run": {
            "initial_state": list(report.initial_state.as_tuple()),
            "sigma_obs": report.sigma_obs,
            "step": report.step,
        },
    }


def report_from_doc(doc: dict) -> FitReport:
    if doc.get("kind") != "fit_report":
        raise ParseError("not a fit_report document")
    run = doc["run"]
    return FitReport(
        params=_params_from_doc(doc["params"]),
        r2=float(doc["fit"]["r2"]),
        rmse=float(doc["fit"]["rmse"]),
        stability=verdict_from_doc(doc["stability"]),
        times=np.asarray(doc["overlay"]["t"], dtype=float),
        observed=np.asarray(doc["overlay"]["observed"], dtype=float),
        predicted=np.asarray(doc["overlay"]["predicted"], dtype=float),
        summary=_summary_from_doc(doc["chain"]),
        n_iter=int(doc["chain"]["n_iter"]),
        burn_in=int(doc["chain"]["burn_in"]),
        seed=int(doc["chain"]["seed"]),
        initial_state=StateVec(*(float(v) for v in run["initial_state"])),
        sigma_obs=float(run["sigma_obs"]),
        step=float(run["step"]),
    )


def dumps_doc(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit_report(report: FitReport, path: str | Path) -> None:
    Path(path).write_text(dumps_doc(report_to_doc(report)), encoding="utf-8")


def load_report(path: str | Path) -> FitReport:
    return report_from_doc(json.loads(Path(path).read_text(encoding="utf-8")))


def _series_doc(s: ObservedSeries) -> dict:
    return {
        "times": [float(x) for x in s.times],
        "values": [float(x) for x in s.values],
        "label": s.label,
        "scale": s.scale,
    }


def _series_from_doc(doc: dict) -> ObservedSeries:
    return ObservedSeries(
        times=np.asarray(doc["times"], dtype=float),
        values=np.asarray(doc["values"], dtype=float),
        label=doc.get("label", ""),
        scale=float(doc.get("scale", 1.0)),
    )


def session_to_doc(session: PesSession) -> dict:
    return {
        "kind": "pes_session",
        "session_id": session.session_id,
        "status": session.status.value,
        "observed": _series_doc(session.observed),
        "theta": {n: getattr(session.theta, n) for n in THETA_NAMES},
        "fixed": {"zeta": session.zeta, "tau1": session.tau1, "tau2": session.tau2},
        "run": {
            "initial_state": list(session.initial_state.as_tuple()),
            "sigma_obs": session.sigma_obs,
            "step": session.step,
            "seed": session.seed,
        },
        "guesses": {
            "zeta0": session.guesses.zeta0,
            "tau1_0": session.guesses.tau1_0,
            "tau2_0": session.guesses.tau2_0,
            "fallback": session.guesses.fallback,
        },
        "iterations": [
            {
                "index": e.index,
                "adjustment": dict(e.adjustment),
                "timestamp": e.timestamp,
                "report": report_to_doc(e.report),
            }
            for e in session.iterations
        ],
    }


def session_from_doc(doc: dict) -> PesSession:
    if doc.get("kind") != "pes_session":
        raise ParseError("not a pes_session document")
    run = doc["run"]
    g = doc["guesses"]
    session = PesSession(
        observed=_series_from_doc(doc["observed"]),
        theta=ThetaFree(**{n: float(doc["theta"][n]) for n in THETA_NAMES}),
        zeta=float(doc["fixed"]["zeta"]),
        tau1=float(doc["fixed"]["tau1"]),
        tau2=float(doc["fixed"]["tau2"]),
        initial_state=StateVec(*(float(v) for v in run["initial_state"])),
        sigma_obs=float(run["sigma_obs"]),
        step=float(run["step"]),
        seed=int(run["seed"]),
        guesses=InitialGuesses(
            zeta0=float(g["zeta0"]),
            tau1_0=float(g["tau1_0"]),
            tau2_0=float(g["tau2_0"]),
            fallback=bool(g["fallback"]),
        ),
        iterations=[
            IterationEntry(
                index=int(e["index"]),
                adjustment={k: float(v) for k, v in e["adjustment"].items()},
                report=report_from_doc(e["report"]),
                timestamp=float(e["timestamp"]),
            )
            for e in doc["iterations"]
        ],
        status=SessionStatus(doc["status"]),
        session_id=doc["session_id"],
    )
    return session


def trajectory_table(traj) -> str:
    """CSV table of a trajectory (shortest round-trip float formatting)."""
    lines = ["t,y1,y2,y3,y4"]
    for t, row in zip(traj.grid, traj.states):
        lines.append(
            f"{float(t)!r},{float(row[0])!r},{float(row[1])!r},"
            f"{float(row[2])!r},{float(row[3])!r}"
        )
    return "\n".join(lines) + "\n"
