"""boomkit: simulate, stability-check and calibrate the delayed boom model."""

from .goodness import ObservedSeries, PredictedSeries, r_squared, residuals
from .inference import Chain, FixedContext, ThetaFree, run_chain
from .integrate import HistorySpec, Trajectory, integrate, integrate_hutchinson
from .model import BoomParams, StateVec, rhs, validate_params
from .pes import FitReport, PesSession, finalize, initial_guesses, pes_iterate
from .stability import (
    EquilibriumPoint,
    StabilityVerdict,
    check_theorem1,
    equilibria,
    perturbation_decay_probe,
)

__version__ = "0.1.0"

__all__ = [
    "BoomParams",
    "StateVec",
    "rhs",
    "validate_params",
    "HistorySpec",
    "Trajectory",
    "integrate",
    "integrate_hutchinson",
    "EquilibriumPoint",
    "StabilityVerdict",
    "equilibria",
    "check_theorem1",
    "perturbation_decay_probe",
    "ObservedSeries",
    "PredictedSeries",
    "r_squared",
    "residuals",
    "ThetaFree",
    "FixedContext",
    "Chain",
    "run_chain",
    "PesSession",
    "FitReport",
    "initial_guesses",
    "pes_iterate",
    "finalize",
    "__version__",
]
