"""Stochastic model-based methods for weakly convex composite minimization."""

from .models import ModelKind, Regularizer, StepResult
from .problems import DesignSpec, NoiseSpec, PhaseRetrievalInstance, generate_instance
from .rng import Rng
from .schedules import Schedule, TuningGrid

__all__ = [
    "Rng",
    "DesignSpec",
    "NoiseSpec",
    "PhaseRetrievalInstance",
    "generate_instance",
    "ModelKind",
    "Regularizer",
    "StepResult",
    "Schedule",
    "TuningGrid",
]

__version__ = "0.1.0"
