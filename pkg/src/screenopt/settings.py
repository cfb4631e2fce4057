"""screenopt runtime settings."""

import os

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

LOG_LEVELS: frozenset[str] = frozenset({"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"})


class Settings(BaseSettings):
    """Configuration for screenopt construction and evaluation runs.

    Values feed CLI defaults and service wiring. The numerical core never
    reads the environment; it receives everything through explicit arguments.

    All settings use the SCREENOPT_ environment variable prefix.
    """

    service_name: str = "screenopt"

    # ---------------------------------------------------------------------------
    # Parallelism
    # ---------------------------------------------------------------------------
    threads: int = Field(
        default_factory=lambda: os.cpu_count() or 1,
        ge=1,
        description="Upper bound on concurrently executed coordinate-exchange starts",
    )

    # ---------------------------------------------------------------------------
    # Logging
    # ---------------------------------------------------------------------------
    log_level: str = Field(
        default="WARNING",
        description="Minimum level of log events written to standard error",
    )
    log_json: bool = Field(
        default=False,
        description="Render log events as JSON lines instead of console text",
    )

    # ---------------------------------------------------------------------------
    # Criterion defaults
    # ---------------------------------------------------------------------------
    nuisance_weight: float = Field(
        default=1e-6,
        gt=0.0,
        description="Weight w on nuisance positions for weighted and s-restricted A criteria",
    )

    # ---------------------------------------------------------------------------
    # Search tolerances and caps
    # ---------------------------------------------------------------------------
    equal_tol: float = Field(
        default=1e-8,
        gt=0.0,
        description="Relative tolerance for declaring two criterion values equal",
    )
    improve_tol: float = Field(
        default=1e-10,
        gt=0.0,
        description="Relative improvement a coordinate exchange must exceed to be accepted",
    )
    max_passes: int = Field(
        default=100,
        ge=1,
        description="Safety cap on full coordinate-exchange passes per start",
    )
    start_attempts: int = Field(
        default=1000,
        ge=1,
        description="Random draws tried before a start is declared singular",
    )
    default_batch: int = Field(
        default=100,
        ge=1,
        description="Starts per batch in the discrete/continuous protocol",
    )
    protocol_start_cap: int = Field(
        default=1000,
        ge=1,
        description="Total starts the discrete/continuous protocol may spend",
    )

    model_config = SettingsConfigDict(env_prefix="SCREENOPT_")

    @field_validator("log_level", mode="before")
    @classmethod
    def validate_log_level(cls, value: object) -> str:
        """Normalise the log level name.

        Args:
            value: Raw value from the environment.

        Returns:
            Upper-case standard logging level name.

        Raises:
            ValueError: If the name is not a standard logging level.
        """
        level = str(value).upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"SCREENOPT_LOG_LEVEL must be one of {sorted(LOG_LEVELS)}")
        return level
