"""Specs, reports and SQLAlchemy models."""

from .base import Base
from .experiment_run import ExperimentRun
from .generators import GeneratorSpec
from .reports import Algorithm, ExperimentConfig, RepetitionRecord, RunReport
from .specs import (
    AmplifyConfig,
    EstimatorConfig,
    FunctionSpec,
    InstanceSpec,
    MatroidSpec,
)

__all__ = [
    "Base",
    "ExperimentRun",
    "GeneratorSpec",
    "Algorithm",
    "ExperimentConfig",
    "RepetitionRecord",
    "RunReport",
    "AmplifyConfig",
    "EstimatorConfig",
    "FunctionSpec",
    "InstanceSpec",
    "MatroidSpec",
]
