"""Four-state societal-boom model with two time delays.

Participants occupy one of four states: pre-boom (potential adopters, y1),
on-boom (actively engaged, y2), rooted boom (retained, y3) and unrooted boom
(dropped out, y4). The flow rates are

    dy1/dt = -alpha*y1(t)*y2(t-tau1) - delta*y1(t) + epsilon*y2(t-tau2) + zeta
    dy2/dt =  alpha*y1(t)*y2(t-tau1) - (beta+gamma)*y2(t) + delta*y1(t)
    dy3/dt =  beta*y2(t) - epsilon*y2(t-tau2) - zeta
    dy4/dt =  gamma*y2(t)

The product alpha*y1*y2(t-tau1) is the infectivity term: on-boom individuals
convert potential adopters after an adoption lag tau1. epsilon*y2(t-tau2)
re-seeds potential adopters out of the rooted pool (resurgence after lag
tau2), and zeta is a constant exchange rate between the rooted and pre-boom
pools; a positive zeta sustains a nonzero long-run boom level. The four
right-hand sides sum to zero, so the total population is conserved.

State components are deliberately not clamped to be non-negative: the model
is a continuum description and clamping would alter the dynamics that the
stability analysis in :mod:`boomkit.stability` describes. Downstream layers
(the fit penalties in :mod:`boomkit.inference`) handle unphysical regions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["BoomParams", "StateVec", "rhs", "validate_params"]


@dataclass(frozen=True)
class BoomParams:
    """The eight scalars governing the model.

    alpha    transmission rate per person per unit time (> 0)
    beta     retention rate per unit time (beta + gamma > 0)
    gamma    quit rate per unit time
    delta    natural-adoption rate per unit time (> 0)
    epsilon  resurgence rate per unit time (any real)
    zeta     compelled-transfer ("Sakura") rate per unit time (any real)
    tau1     adoption delay, time units (0 <= tau1 < tau2)
    tau2     resurgence delay, time units
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float
    zeta: float
    tau1: float
    tau2: float


@dataclass(frozen=True)
class StateVec:
    """Real-valued counts per state; also used for d/dt components."""

    y1: float
    y2: float
    y3: float
    y4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.y1, self.y2, self.y3, self.y4)


def validate_params(params: BoomParams) -> BoomParams | list[str]:
    """Check the parameter constraints.

    Returns the params unchanged when every constraint holds, otherwise a
    list naming each violated constraint. epsilon and zeta may be any finite
    real; bounds involving them belong to the stability checker.
    """
    violations: list[str] = []
    for name in ("alpha", "beta", "gamma", "delta", "epsilon", "zeta", "tau1", "tau2"):
        if not math.isfinite(getattr(params, name)):
            violations.append(f"{name} finite")
    if violations:
        return violations
    if not params.alpha > 0:
        violations.append("alpha > 0")
    if not params.beta + params.gamma > 0:
        violations.append("beta + gamma > 0")
    if not params.delta > 0:
        violations.append("delta > 0")
    if params.tau1 < 0:
        violations.append("tau1 >= 0")
    if not params.tau1 < params.tau2:
        violations.append("tau1 < tau2")
    return violations if violations else params


def ensure_valid(params: BoomParams) -> BoomParams:
    """validate_params, raising :class:`ValidationError` on any violation."""
    from .errors import ValidationError

    result = validate_params(params)
    if isinstance(result, list):
        raise ValidationError(
            "invalid parameters: " + "; ".join(result), violations=result
        )
    return result


def _require_finite(vec: StateVec, role: str) -> None:
    for name in ("y1", "y2", "y3", "y4"):
        if not math.isfinite(getattr(vec, name)):
            raise DomainError(f"non-finite {role}.{name}")


def rhs(
    current: StateVec,
    delayed_tau1: StateVec,
    delayed_tau2: StateVec,
    params: BoomParams,
) -> StateVec:
    """Evaluate the model right-hand side.

    ``delayed_tau1`` and ``delayed_tau2`` supply the state at t-tau1 and
    t-tau2; only their y2 components enter the flow. The returned StateVec
    holds the four time derivatives, which sum to zero up to rounding.
    """
    _require_finite(current, "current")
    _require_finite(delayed_tau1, "delayed_tau1")
    _require_finite(delayed_tau2, "delayed_tau2")
    return rhs_components(
        params,
        current.y1,
        current.y2,
        delayed_tau1.y2,
        delayed_tau2.y2,
    )


def rhs_components(
    params: BoomParams,
    y1: float,
    y2: float,
    y2_lag1: float,
    y2_lag2: float,
) -> StateVec:
    """rhs on raw components (no finiteness checks); used by the integrator."""
    infect = params.alpha * y1 * y2_lag1
    adopt = params.delta * y1
    resurge = params.epsilon * y2_lag2
    d1 = -infect - adopt + resurge + params.zeta
    d2 = infect - (params.beta + params.gamma) * y2 + adopt
    d3 = params.beta * y2 - resurge - params.zeta
    d4 = params.gamma * y2
    return StateVec(d1, d2, d3, d4)
