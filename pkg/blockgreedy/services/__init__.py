"""Services for instances and experiments."""

from .experiment_service import ExperimentService, run_experiment
from .instance_service import generate_instance, generate_instance_spec

__all__ = [
    "ExperimentService",
    "run_experiment",
    "generate_instance",
    "generate_instance_spec",
]
