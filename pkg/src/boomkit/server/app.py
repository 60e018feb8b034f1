"""HTTP layer for sessions, fit jobs, previews and stability checks.

Long MCMC rounds run as background jobs observed by polling (progress is the
fraction of iterations completed); everything else answers synchronously.
Payloads use the same document schema that :mod:`boomkit.dataio` writes to
disk, so the UI and the files stay interchangeable.
"""

from __future__ import annotations

import math
import threading

import numpy as np
from fastapi import FastAPI, File, UploadFile
from fastapi.responses import JSONResponse

from ..dataio import (
    build_config,
    parse_kv_text,
    parse_series_text,
    report_to_doc,
    verdict_to_doc,
)
from ..errors import BoomkitError, DivergenceError
from ..inference import FixedContext, make_params
from ..integrate import HistorySpec, integrate
from ..model import BoomParams, StateVec, validate_params
from ..pes import McmcSettings, finalize, new_session, pes_iterate
from ..stability import check_theorem1
from .schemas import (
    FitRequest,
    JobCreated,
    JobView,
    SessionCreated,
    SimulateRequest,
)
from .store import Job, Store

PREVIEW_POINT_CAP = 2000


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, **extra})


def downsample_indices(n: int, cap: int = PREVIEW_POINT_CAP) -> list[int]:
    """Indices of at most ``cap`` points, always keeping both endpoints."""
    if n <= cap:
        return list(range(n))
    stride = math.ceil(n / cap)
    idx = list(range(0, n, stride))
    if idx[-1] != n - 1:
        idx[-1] = n - 1
    return idx


def _job_view(job: Job) -> JobView:
    return JobView(
        job_id=job.job_id,
        kind=job.kind,
        status=job.status,
        progress=job.progress,
        session_id=job.session_id,
        error=job.error,
        result=job.result,
    )


def create_app(store_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="boomkit", version="0.1.0")
    store = Store(store_dir)
    app.state.store = store

    @app.post("/sessions", response_model=SessionCreated, status_code=201)
    async def create_session(
        series: UploadFile = File(...),
        config: UploadFile | None = File(default=None),
    ):
        raw = (await series.read()).decode("utf-8", errors="replace")
        if not raw.strip():
            return _error(400, "series upload is empty")
        try:
            cfg_text = (await config.read()).decode("utf-8") if config else ""
            cfg = build_config(parse_kv_text(cfg_text))
            observed = parse_series_text(
                raw,
                label=series.filename or "upload",
                normalize=cfg.normalize,
            )
            session = new_session(
                observed,
                cfg.theta(),
                cfg.initial_state(),
                sigma_obs=cfg.sigma_obs,
                step=cfg.step,
                seed=cfg.seed,
            )
        except BoomkitError as exc:
            return _error(400, str(exc))
        store.add_session(session)
        return SessionCreated(session_id=session.session_id)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        doc = store.session_doc(session_id)
        if doc is None:
            return _error(404, f"unknown session {session_id}")
        return doc

    @app.post("/sessions/{session_id}/fit", response_model=JobCreated, status_code=202)
    def start_fit(session_id: str, request: FitRequest):
        session = store.get_session(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id}")
        if session.status.value == "Finalized":
            return _error(409, "session is finalized")

        adjustment = None
        if request.adjustment is not None:
            adjustment = {
                k: v
                for k, v in request.adjustment.model_dump().items()
                if v is not None
            }
            tau1 = adjustment.get("tau1", session.tau1)
            tau2 = adjustment.get("tau2", session.tau2)
            if not (0 <= tau1 < tau2):
                return _error(
                    400, f"adjustment rejected: need 0 <= tau1 < tau2, got ({tau1}, {tau2})"
                )

        overrides = request.mcmc
        kwargs = {}
        sigma_obs = None
        if overrides is not None:
            if overrides.n_iter is not None:
                kwargs["n_iter"] = overrides.n_iter
            if overrides.burn_in is not None:
                kwargs["burn_in"] = overrides.burn_in
            if overrides.seed is not None:
                kwargs["seed"] = overrides.seed
            if overrides.scales is not None:
                kwargs["scales"] = np.asarray(overrides.scales, dtype=float)
            sigma_obs = overrides.sigma_obs
        try:
            settings = McmcSettings(**kwargs)
        except BoomkitError as exc:
            return _error(400, str(exc))

        job = store.begin_job(session_id, kind="fit")
        if job is None:
            return _error(409, "a fit job is already running for this session")

        def work() -> None:
            job.advance("Running")
            store.persist_job(job.job_id)

            def progress(done: int, total: int) -> None:
                job.progress = done / total if total else 1.0

            try:
                with store.lock:
                    if sigma_obs is not None:
                        session.sigma_obs = sigma_obs
                pes_iterate(session, adjustment, settings, progress=progress)
                result = report_to_doc(session.iterations[-1].report)
                store.persist_session(session_id)
                store.finish_job(job.job_id, result=result, error=None)
            except Exception as exc:  # job captures any failure for polling
                store.finish_job(job.job_id, result=None, error=str(exc))

        threading.Thread(target=work, daemon=True).start()
        return JobCreated(job_id=job.job_id)

    @app.get("/jobs/{job_id}", response_model=JobView)
    def poll_job(job_id: str):
        job = store.get_job(job_id)
        if job is None:
            return _error(404, f"unknown job {job_id}")
        return _job_view(job)

    @app.post("/simulate")
    def simulate_preview(request: SimulateRequest):
        params = BoomParams(
            alpha=request.alpha,
            beta=request.beta,
            gamma=request.gamma,
            delta=request.delta,
            epsilon=request.epsilon,
            zeta=request.zeta,
            tau1=request.tau1,
            tau2=request.tau2,
        )
        checked = validate_params(params)
        if isinstance(checked, list):
            return _error(400, "invalid parameters", violations=checked)
        y0 = request.initial_state or [1.0, 0.01, 0.0, 0.0]
        if len(y0) != 4:
            return _error(400, "initial_state must have 4 components")
        state = StateVec(*(float(v) for v in y0))
        if request.horizon == 0:
            return {
                "t": [0.0],
                "y1": [state.y1],
                "y2": [state.y2],
                "y3": [state.y3],
                "y4": [state.y4],
            }
        try:
            traj = integrate(params, HistorySpec(state), request.horizon, request.step)
        except DivergenceError as exc:
            return _error(400, "divergence", time=exc.time)
        except BoomkitError as exc:
            return _error(400, str(exc))
        idx = downsample_indices(len(traj.grid))
        return {
            "t": [float(traj.grid[i]) for i in idx],
            "y1": [float(traj.states[i, 0]) for i in idx],
            "y2": [float(traj.states[i, 1]) for i in idx],
            "y3": [float(traj.states[i, 2]) for i in idx],
            "y4": [float(traj.states[i, 3]) for i in idx],
        }

    @app.get("/sessions/{session_id}/stability")
    def session_stability(session_id: str):
        session = store.get_session(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id}")
        fixed = FixedContext(
            zeta=session.zeta,
            tau1=session.tau1,
            tau2=session.tau2,
            initial_state=session.initial_state,
            sigma_obs=session.sigma_obs,
            step=session.step,
        )
        params = make_params(session.theta, fixed)
        try:
            verdict = check_theorem1(params)
        except BoomkitError as exc:
            return _error(400, str(exc))
        return verdict_to_doc(verdict)

    @app.post("/sessions/{session_id}/finalize")
    def finalize_session(session_id: str):
        session = store.get_session(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id}")
        with store.lock:
            if store.has_active_job(session_id):
                return _error(409, "a fit job is still running")
            try:
                report = finalize(session)
            except BoomkitError as exc:
                return _error(400, str(exc))
            store.persist_session(session_id)
        return report_to_doc(report)

    return app
