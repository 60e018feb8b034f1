"""Equilibria of the boom model and a sufficient linear-stability test.

The (y1, y2) subsystem closes on itself (y3, y4 are passive accumulators),
so equilibrium and stability analysis happens in that plane. With zeta = 0
the origin is an equilibrium; with zeta != 0 there is a unique nontrivial
point

    E1 = ( (beta+gamma)*zeta / B ,  zeta / A )

with A = beta + gamma - epsilon and B = alpha*zeta + delta*A.

Linearising about E1 gives the transcendental characteristic function

    chi(lam) = lam^2 + (beta+gamma+delta - alpha*y1*exp(-tau1*lam)
               + alpha*y2) * lam + (alpha*y2 + delta)
               * (beta+gamma - epsilon*exp(-tau2*lam))

whose root real parts decide local stability. :func:`check_theorem1`
evaluates a set of closed-form inequalities sufficient (not necessary) for
every root to have negative real part; :func:`perturbation_decay_probe`
corroborates a verdict numerically by integrating a small kick and watching
it die out. No general rightmost-root solver is attempted here: root finding
for quasi-polynomials is out of scope, and the probe plus the residual
evaluator cover the package's needs.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

from .errors import DegenerateEquilibriumError, ValidationError
from .integrate import HistorySpec, integrate
from .model import BoomParams, StateVec, ensure_valid

__all__ = [
    "EquilibriumKind",
    "EquilibriumPoint",
    "Verdict",
    "StabilityVerdict",
    "DecayProbeResult",
    "equilibria",
    "characteristic_residual",
    "check_theorem1",
    "perturbation_decay_probe",
]


class EquilibriumKind(enum.Enum):
    TRIVIAL = "trivial"
    NON_TRIVIAL = "non_trivial"


@dataclass(frozen=True)
class EquilibriumPoint:
    y1_star: float
    y2_star: float
    kind: EquilibriumKind


class Verdict(enum.Enum):
    SUFFICIENT_STABLE = "SufficientStable"
    INCONCLUSIVE = "Inconclusive"


#: condition keys, in reporting order
CONDITION_KEYS = ("cond6", "cond7", "cond8", "cond9", "cond10", "cond11")


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of the sufficient-condition check.

    conditions maps each of the six inequality labels to True/False, or None
    where the inequality is not evaluable (the resurgence-bound expressions
    divide by epsilon). quantities carries the intermediate numbers:

        A               beta + gamma - epsilon
        B               alpha*zeta + delta*A
        cond7_bound     B / (alpha*zeta*(beta+gamma)), compared to tau1/2
        resurgence_bound(1/epsilon)*(delta*(beta+gamma)*A^2/B^2 + 1),
                        compared to tau2 (None when not evaluable)
        consolidated    ((beta+gamma)*delta*A^2 + (1-epsilon*tau2)*B^2)/(A*B),
                        the sharper internal quantity, reported as a
                        diagnostic (None when A*B = 0)

    The verdict is SufficientStable iff cond6 and cond7 hold together with
    either (cond8 and cond9) or (cond10 and cond11), and epsilon > 0. The
    inequality set presumes a positive resurgence rate; for epsilon <= 0 the
    verdict is always Inconclusive. Inconclusive never means unstable: the
    test is one-sided.
    """

    verdict: Verdict
    conditions: dict[str, bool | None] = field(default_factory=dict)
    quantities: dict[str, float | None] = field(default_factory=dict)


@dataclass(frozen=True)
class DecayProbeResult:
    decayed: bool
    final_distance: float


def equilibria(params: BoomParams) -> list[EquilibriumPoint]:
    """Closed-form equilibria of the (y1, y2) subsystem.

    zeta == 0 gives the trivial point; otherwise the nontrivial closed form,
    provided neither denominator vanishes.
    """
    ensure_valid(params)
    if params.zeta == 0.0:
        return [EquilibriumPoint(0.0, 0.0, EquilibriumKind.TRIVIAL)]
    bg = params.beta + params.gamma
    a_quant = bg - params.epsilon
    if a_quant == 0.0:
        raise DegenerateEquilibriumError(
            "beta + gamma - epsilon = 0: no nontrivial equilibrium"
        )
    b_quant = params.alpha * params.zeta + params.delta * a_quant
    if b_quant == 0.0:
        raise DegenerateEquilibriumError(
            "alpha*zeta + delta*(beta+gamma-epsilon) = 0: no nontrivial equilibrium"
        )
    y1_star = bg * params.zeta / b_quant
    y2_star = params.zeta / a_quant
    return [EquilibriumPoint(y1_star, y2_star, EquilibriumKind.NON_TRIVIAL)]


def characteristic_residual(
    params: BoomParams, eq: EquilibriumPoint, lam: complex
) -> complex:
    """Evaluate the characteristic function chi at a complex lambda.

    chi(0) collapses algebraically to alpha*zeta + delta*(beta+gamma-epsilon),
    a handy cross-check; conjugate inputs give conjugate outputs because all
    coefficients are real.
    """
    if eq.kind is not EquilibriumKind.NON_TRIVIAL:
        raise ValidationError("characteristic function is defined about E1 only")
    lam = complex(lam)
    bg = params.beta + params.gamma
    y1s, y2s = eq.y1_star, eq.y2_star
    linear = (
        bg
        + params.delta
        - params.alpha * y1s * cmath.exp(-params.tau1 * lam)
        + params.alpha * y2s
    )
    constant = (params.alpha * y2s + params.delta) * (
        bg - params.epsilon * cmath.exp(-params.tau2 * lam)
    )
    return lam * lam + linear * lam + constant


def check_theorem1(params: BoomParams) -> StabilityVerdict:
    """Evaluate the six sufficient inequalities and combine them.

    Labels follow the reporting order used across the package:

        cond6   A > 0
        cond7   B / (alpha*zeta*(beta+gamma)) > tau1 / 2
        cond8   B > 0
        cond9   resurgence_bound > tau2   (positive-B branch)
        cond10  B < 0
        cond11  resurgence_bound < tau2   (negative-B branch)
    """
    ensure_valid(params)
    if params.zeta == 0.0:
        raise ValidationError("stability check requires zeta != 0")

    bg = params.beta + params.gamma
    a_quant = bg - params.epsilon
    b_quant = params.alpha * params.zeta + params.delta * a_quant

    conditions: dict[str, bool | None] = {}
    quantities: dict[str, float | None] = {"A": a_quant, "B": b_quant}

    conditions["cond6"] = a_quant > 0.0
    cond7_bound = b_quant / (params.alpha * params.zeta * bg)
    quantities["cond7_bound"] = cond7_bound
    conditions["cond7"] = cond7_bound > params.tau1 / 2.0
    conditions["cond8"] = b_quant > 0.0
    conditions["cond10"] = b_quant < 0.0

    if params.epsilon != 0.0 and b_quant != 0.0:
        resurgence_bound = (1.0 / params.epsilon) * (
            params.delta * bg * a_quant * a_quant / (b_quant * b_quant) + 1.0
        )
        quantities["resurgence_bound"] = resurgence_bound
        conditions["cond9"] = resurgence_bound > params.tau2
        conditions["cond11"] = resurgence_bound < params.tau2
    else:
        quantities["resurgence_bound"] = None
        conditions["cond9"] = None
        conditions["cond11"] = None

    if a_quant * b_quant != 0.0:
        quantities["consolidated"] = (
            bg * params.delta * a_quant * a_quant
            + (1.0 - params.epsilon * params.tau2) * b_quant * b_quant
        ) / (a_quant * b_quant)
    else:
        quantities["consolidated"] = None

    positive_branch = bool(conditions["cond8"]) and conditions["cond9"] is True
    negative_branch = bool(conditions["cond10"]) and conditions["cond11"] is True
    sufficient = (
        params.epsilon > 0.0
        and conditions["cond6"]
        and conditions["cond7"]
        and (positive_branch or negative_branch)
    )
    verdict = Verdict.SUFFICIENT_STABLE if sufficient else Verdict.INCONCLUSIVE
    return StabilityVerdict(
        verdict=verdict, conditions=conditions, quantities=quantities
    )


def perturbation_decay_probe(
    params: BoomParams,
    magnitude: float,
    horizon: float,
    step: float | None = None,
) -> DecayProbeResult:
    """Kick y2 off the nontrivial equilibrium and watch the distance.

    Starts from the constant history E1 with y2 offset by ``magnitude``
    (required to stay within 10% of |E1|), integrates to ``horizon`` and
    reports whether the planar distance to E1 shrank below 1% of the kick.
    A divergent run reports decayed=False with infinite distance.
    """
    (eq,) = equilibria(params)
    if eq.kind is not EquilibriumKind.NON_TRIVIAL:
        raise ValidationError("decay probe requires the nontrivial equilibrium")
    scale = math.hypot(eq.y1_star, eq.y2_star)
    if magnitude < 0 or magnitude > 0.1 * scale:
        raise ValidationError(
            f"magnitude {magnitude!r} must lie in [0, 10% of |E1|] = [0, {0.1 * scale!r}]"
        )
    if step is None:
        step = min(0.05, params.tau1 / 4.0 if params.tau1 > 0 else math.inf,
                   params.tau2 / 4.0)
    start = StateVec(eq.y1_star, eq.y2_star + magnitude, 0.0, 0.0)
    try:
        traj = integrate(params, HistorySpec(start), horizon, step)
    except Exception:
        return DecayProbeResult(decayed=False, final_distance=math.inf)
    end = traj.sample_at(traj.horizon)
    dist = math.hypot(end.y1 - eq.y1_star, end.y2 - eq.y2_star)
    threshold = max(0.01 * magnitude, 1e-8)
    return DecayProbeResult(decayed=dist < threshold, final_distance=dist)
