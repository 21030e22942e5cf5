"""Application configuration using Pydantic Settings."""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application Settings
    environment: str = "development"
    log_level: str = "INFO"
    api_prefix: str = "/api/v1"
    report_schema: str = "shift-compactness-report/1"

    # Estimator horizons
    horizon_n: int = 4096
    horizon_k: int = 4096
    sliding_horizon_n: int = 16  # window lengths scanned over horizon_k positions
    tail_fraction: float = 0.25  # share of the sequence used by limsup/liminf proxies
    inverse_table_horizon: int = 2**17

    # Tolerances
    chain_tolerance: float = 1e-10
    verdict_relative_tau: float = 1e-6
    cauchy_tolerance: float = 1e-9
    norm_tolerance: float = 1e-10

    # Witness policy
    witness_delta: float = 0.5
    witness_horizon: int = 1024

    # Sampling
    default_seed: int = 42
    validation_samples: int = 200
    validation_max_degree: int = 60

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )


# Global settings instance
settings = Settings()
