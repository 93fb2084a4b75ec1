"""API routers."""

from .experiments import router as experiments_router
from .instances import router as instances_router

__all__ = ["experiments_router", "instances_router"]
