"""Main FastAPI application for the parallel submodular greedy toolkit."""

from collections.abc import AsyncIterator
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from loguru import logger

from blockgreedy.api import experiments_router, instances_router
from blockgreedy.config import settings
from blockgreedy.db.session import init_db
from blockgreedy.log import configure_logging


@asynccontextmanager
async def lifespan(app: FastAPI) -> AsyncIterator[None]:
    configure_logging()
    await init_db()
    logger.info("{} ready", settings.app_name)
    yield


app = FastAPI(
    title=settings.app_name,
    description="Low-adaptivity greedy algorithms for submodular maximization "
    "under matroid and matchoid constraints",
    version="0.1.0",
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)

app.include_router(experiments_router)
app.include_router(instances_router)


@app.get("/")
async def root() -> dict[str, str | dict[str, str]]:
    """Root endpoint with basic information."""
    return {
        "message": "Parallel Submodular Greedy API",
        "version": "0.1.0",
        "endpoints": {
            "experiments": "/experiments",
            "instances": "/instances/generate",
            "docs": "/docs",
        },
    }


@app.get("/health")
async def health_check() -> dict[str, str]:
    """Health check endpoint."""
    return {"status": "healthy", "service": "parallel-submodular-greedy"}


@app.exception_handler(HTTPException)
async def http_exception_handler(request: Request, exc: HTTPException) -> JSONResponse:
    """Custom exception handler for HTTP errors."""
    return JSONResponse(
        status_code=exc.status_code,
        content={"detail": exc.detail, "status_code": exc.status_code},
    )


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception) -> JSONResponse:
    """General exception handler."""
    logger.exception("unhandled error on {}", request.url.path)
    return JSONResponse(
        status_code=500, content={"detail": "Internal server error", "status_code": 500}
    )


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "blockgreedy.main:app", host="0.0.0.0", port=8000, reload=settings.debug
    )
