"""Configuration settings for the parallel submodular greedy toolkit."""

import math

from pydantic_settings import BaseSettings

from blockgreedy.models.specs import AmplifyConfig, EstimatorConfig


class Settings(BaseSettings):
    """Application settings."""

    # Database
    database_url: str = "sqlite+aiosqlite:///./blockgreedy.db"

    # Execution engine
    workers: int = 1

    # Logging
    log_level: str = "INFO"
    log_json: bool = False

    # Estimator constants
    chernoff_c: float = 2.0
    chernoff_d: float = 1.0 / 3.0
    fail_poly_exp: int = 3
    grid_constant: float = 0.25
    margin_band: float = 0.125
    sample_cap: int | None = 256
    max_grid_points: int | None = 16
    empty_redraws: int = 1024
    max_block_calls: int = 10_000

    # Amplification
    aux_samples: int = 64
    ell_factor: float = 4.0

    # Reports
    opt_limit: int = 20
    report_version: str = "1"

    # Application
    app_name: str = "Parallel Submodular Greedy"
    debug: bool = False

    class Config:
        env_file = ".env"
        case_sensitive = False


settings = Settings()


def estimator_config_from_settings(current: Settings | None = None) -> EstimatorConfig:
    """Estimator constants and caps taken from the settings."""
    current = current or settings
    return EstimatorConfig(
        chernoff_c=current.chernoff_c,
        chernoff_d=current.chernoff_d,
        fail_poly_exp=current.fail_poly_exp,
        grid_constant=current.grid_constant,
        margin_band=current.margin_band,
        sample_cap=current.sample_cap,
        max_grid_points=current.max_grid_points,
        empty_redraws=current.empty_redraws,
        max_block_calls=current.max_block_calls,
    )


def amplify_defaults(
    amp: AmplifyConfig, eps: float, current: Settings | None = None
) -> AmplifyConfig:
    """Fill the unset amplification options from the settings."""
    current = current or settings
    update: dict[str, object] = {}
    if amp.ell is None:
        update["ell"] = max(1, math.ceil(current.ell_factor / eps))
    if amp.max_samples is None:
        update["max_samples"] = current.aux_samples
    return amp.model_copy(update=update)
