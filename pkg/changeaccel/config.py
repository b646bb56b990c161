"""Application configuration using environment variables."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "console"  # console or json

    # Simulation
    MAX_HORIZON: int = 10_000_000
    DEFAULT_REPS: int = 100_000
    SCREEN_REPS: int = 10_000
    WORKERS: int = 1

    # Dynamic programming
    DP_GRID_SIZE: int = 1000
    DP_TOL: float = 1e-9
    DP_RELATIVE_TOL: float = 1e-6
    DP_MAX_ITER: int = 100_000
    DP_TAIL_POINTS: int = 200
    DP_TAIL_LOG_ODDS: float = 23.0

    # Treatment quality
    LAMBDA_SURVIVAL_CUTOFF: float = 1e-12
    KL_MC_DRAWS: int = 1_000_000

    # Output
    OUTPUT_DIR: str = "results"

    model_config = SettingsConfigDict(
        env_prefix="CHANGEACCEL_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
