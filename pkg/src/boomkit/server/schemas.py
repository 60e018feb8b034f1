"""Pydantic request/response models for the HTTP surface."""

from __future__ import annotations

from pydantic import BaseModel, Field


class SimulateRequest(BaseModel):
    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float
    zeta: float
    tau1: float
    tau2: float
    horizon: float = Field(ge=0)
    step: float = Field(gt=0)
    initial_state: list[float] | None = None  # [y1, y2, y3, y4]


class Adjustment(BaseModel):
    zeta: float | None = None
    tau1: float | None = None
    tau2: float | None = None


class McmcOverrides(BaseModel):
    n_iter: int | None = Field(default=None, ge=0)
    burn_in: int | None = Field(default=None, ge=0)
    seed: int | None = None
    scales: list[float] | None = None
    sigma_obs: float | None = Field(default=None, gt=0)


class FitRequest(BaseModel):
    adjustment: Adjustment | None = None
    mcmc: McmcOverrides | None = None


class SessionCreated(BaseModel):
    session_id: str


class JobCreated(BaseModel):
    job_id: str


class JobView(BaseModel):
    job_id: str
    kind: str
    status: str
    progress: float
    session_id: str
    error: str | None = None
    result: dict | None = None
