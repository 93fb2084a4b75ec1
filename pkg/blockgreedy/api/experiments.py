"""Experiments API router."""

from datetime import datetime

from fastapi import APIRouter, Depends, HTTPException, Query
from fastapi.concurrency import run_in_threadpool
from pydantic import BaseModel, ConfigDict
from sqlalchemy.ext.asyncio import AsyncSession

from blockgreedy.db.session import get_session
from blockgreedy.errors import IncompatibleAlgorithmError, SpecError
from blockgreedy.models.reports import ExperimentConfig, RunReport
from blockgreedy.services.experiment_service import ExperimentService, run_experiment

router = APIRouter(prefix="/experiments", tags=["experiments"])


class ExperimentRunSummary(BaseModel):
    """A stored run without its report body."""

    model_config = ConfigDict(from_attributes=True)

    id: int
    instance: str
    algorithm: str
    eps: float
    seed: int
    reps: int
    mean_value: float
    stderr_value: float
    mean_rounds: float
    opt: float | None = None
    ratio: float | None = None
    created_at: datetime | None = None


@router.post("/run", response_model=RunReport)
async def run(
    config: ExperimentConfig,
    opt: str = Query("auto", description="'auto' computes OPT on small instances"),
    session: AsyncSession = Depends(get_session),
) -> RunReport:
    """
    Run an experiment and store its report.

    The algorithm runs in a worker thread; the report is returned without
    wall times.
    """

    if opt not in ["auto", "off"]:
        raise HTTPException(status_code=400, detail="opt must be 'auto' or 'off'")

    try:
        report = await run_in_threadpool(
            run_experiment, config, opt="auto" if opt == "auto" else "off"
        )
    except SpecError as e:
        raise HTTPException(status_code=400, detail=str(e)) from e
    except IncompatibleAlgorithmError as e:
        raise HTTPException(status_code=422, detail=str(e)) from e

    await ExperimentService(session).save_report(report)
    return report.model_copy(
        update={
            "records": [
                record.model_copy(update={"wall_time": None})
                for record in report.records
            ]
        }
    )


@router.get("/", response_model=list[ExperimentRunSummary])
async def list_runs(
    limit: int = Query(20, ge=1, le=200, description="Number of runs to return"),
    session: AsyncSession = Depends(get_session),
) -> list[ExperimentRunSummary]:
    """Stored runs, most recent first."""
    runs = await ExperimentService(session).list_runs(limit=limit)
    return [ExperimentRunSummary.model_validate(run) for run in runs]
