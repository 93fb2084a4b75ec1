"""Experiment configurations and run reports."""

from typing import Literal

from pydantic import BaseModel, Field

from .specs import (
    AmplifyConfig,
    EstimatorConfig,
    FunctionSpec,
    InstanceSpec,
    MatroidSpec,
)

Algorithm = Literal[
    "sequential",
    "block_greedy",
    "amplify_monotone",
    "amplify_nonnegative",
    "beta_scaled",
]


class ExperimentConfig(BaseModel):
    """An instance, an algorithm and how often to run it."""

    name: str = "instance"
    matroid: MatroidSpec
    function: FunctionSpec
    algorithm: Algorithm
    eps: float = Field(..., gt=0, lt=0.5)
    seed: int = Field(0, ge=0)
    reps: int = Field(1, ge=1)
    estimator: EstimatorConfig | None = None
    amplify: AmplifyConfig = AmplifyConfig()

    @property
    def instance(self) -> InstanceSpec:
        return InstanceSpec(
            name=self.name, matroid=self.matroid, function=self.function
        )


class RepetitionRecord(BaseModel):
    """Outcome of one seeded run.

    ``f_calls`` counts evaluations of the input function, including those made
    inside auxiliary oracles; ``queries`` counts the metered value queries,
    which for amplification are queries to the auxiliary g.
    """

    seed: int
    value: float
    rounds: int
    f_calls: int
    queries: int
    matroid_calls: int
    size: int
    feasible: bool
    calls: int | None = None
    fractional_value: float | None = None
    wall_time: float | None = None


class RunReport(BaseModel):
    """Per-repetition records and their aggregates.

    ``ratio`` is mean value / OPT and is only set when OPT was computed.
    """

    version: str
    instance: str
    algorithm: Algorithm
    eps: float
    seed: int
    reps: int
    n: int
    records: list[RepetitionRecord]
    mean_value: float
    stderr_value: float
    mean_rounds: float
    stderr_rounds: float
    mean_f_calls: float
    mean_matroid_calls: float
    mean_calls: float | None = None
    call_constant: float | None = None
    opt: float | None = None
    ratio: float | None = None

    def to_json(self, include_timings: bool = False) -> str:
        """JSON body; wall times are left out unless asked for."""
        if include_timings:
            return self.model_dump_json(indent=2)
        return self.model_dump_json(
            indent=2, exclude={"records": {"__all__": {"wall_time"}}}
        )
