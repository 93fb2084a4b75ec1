"""Shared fixtures: tiny instances, a metered engine and a test database."""

import asyncio
import os

import pytest
from httpx import AsyncClient
from sqlalchemy.ext.asyncio import AsyncSession, async_sessionmaker, create_async_engine

from blockgreedy.db.session import get_session
from blockgreedy.engine import AdaptivityMeter, BatchEngine
from blockgreedy.main import app
from blockgreedy.models import Base, EstimatorConfig
from blockgreedy.oracles import (
    CoverageFunction,
    CutFunction,
    GraphicMatroid,
    ModularFunction,
    PartitionMatroid,
    UniformMatroid,
)

# Test database URL - SQLite file, removed at the end of the session
TEST_DATABASE_URL = "sqlite+aiosqlite:///./test_blockgreedy.db"

test_engine = create_async_engine(TEST_DATABASE_URL, echo=False)
TestingSessionLocal = async_sessionmaker(
    test_engine, class_=AsyncSession, expire_on_commit=False
)

# Coverage instance: A -> {u0, u1}, B -> {u1, u2}, C -> {u0}
A, B, C = 0, 1, 2


@pytest.fixture
def coverage():
    return CoverageFunction([1.0, 1.0, 1.0], [[0, 1], [1, 2], [0]])


@pytest.fixture
def uniform_3_2():
    return UniformMatroid(3, 2)


@pytest.fixture
def triangle():
    return GraphicMatroid(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def partition_2x2():
    return PartitionMatroid([[0, 1], [2, 3]], [1, 1])


@pytest.fixture
def four_cycle_cut():
    return CutFunction(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])


@pytest.fixture
def edge_cut():
    return CutFunction(2, [(0, 1, 1.0)])


@pytest.fixture
def ranks_modular():
    """Weights 1..20."""
    return ModularFunction([float(w) for w in range(1, 21)])


@pytest.fixture
def fast_cfg():
    """Estimator caps small enough for unit tests."""
    return EstimatorConfig(sample_cap=200, max_grid_points=12, max_block_calls=200)


@pytest.fixture
def engine():
    with BatchEngine(AdaptivityMeter()) as batch_engine:
        yield batch_engine


@pytest.fixture
def coverage_config():
    """Experiment config body for the coverage instance."""
    return {
        "name": "coverage_abc",
        "matroid": {"kind": "uniform", "n": 3, "k": 2},
        "function": {
            "kind": "coverage",
            "weights": [1.0, 1.0, 1.0],
            "covers": [[0, 1], [1, 2], [0]],
        },
        "algorithm": "block_greedy",
        "eps": 0.2,
        "seed": 3,
        "reps": 2,
        "estimator": {"sample_cap": 200, "max_grid_points": 12, "max_block_calls": 200},
        "amplify": {"ell": 2, "exact": True},
    }


@pytest.fixture(scope="session")
def event_loop():
    """Create an instance of the default event loop for the test session."""
    loop = asyncio.get_event_loop_policy().new_event_loop()
    yield loop
    loop.close()


@pytest.fixture(scope="session")
async def test_db():
    """Create test database tables."""
    async with test_engine.begin() as conn:
        await conn.run_sync(Base.metadata.create_all)
    yield
    await test_engine.dispose()
    if os.path.exists("./test_blockgreedy.db"):
        os.remove("./test_blockgreedy.db")


@pytest.fixture
async def db_session(test_db):
    """Create a test database session with an empty runs table."""
    async with TestingSessionLocal() as session:
        await session.execute(Base.metadata.tables["experiment_runs"].delete())
        await session.commit()
        yield session
        await session.rollback()


@pytest.fixture
async def client(db_session):
    """Test client bound to the test database."""

    async def override_get_session():
        yield db_session

    app.dependency_overrides[get_session] = override_get_session
    async with AsyncClient(app=app, base_url="http://test") as ac:
        yield ac
    app.dependency_overrides.clear()
