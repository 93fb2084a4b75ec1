"""Instances API router."""

from typing import Any

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field, ValidationError

from blockgreedy.errors import SpecError
from blockgreedy.models.specs import InstanceSpec
from blockgreedy.services.instance_service import (
    generate_instance_spec,
    parse_generator,
)

router = APIRouter(prefix="/instances", tags=["instances"])


class GenerateRequest(BaseModel):
    """Generator kind with its parameters."""

    kind: str
    params: dict[str, Any] = Field(default_factory=dict)
    seed: int = Field(0, ge=0)


@router.post("/generate", response_model=InstanceSpec)
async def generate(request: GenerateRequest) -> InstanceSpec:
    """
    Generate an instance description.

    Kinds: fat_path, fat_tail, random_coverage, random_partition, random_cut,
    bipartite_matchoid. The same kind, params and seed always give the same
    instance.
    """

    try:
        spec = parse_generator(request.kind, request.params)
        return generate_instance_spec(spec, request.seed)
    except ValidationError as e:
        raise HTTPException(
            status_code=400, detail=f"Invalid generator parameters: {e}"
        ) from e
    except SpecError as e:
        raise HTTPException(status_code=400, detail=str(e)) from e
