"""
Core configuration settings for ringlight.
Uses Pydantic settings for environment variable management.
"""

from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ringlight import __version__


class Settings(BaseSettings):
    """Process-wide settings with environment variable support."""

    model_config = SettingsConfigDict(
        env_prefix="RINGLIGHT_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "ringlight"
    version: str = __version__
    environment: str = "development"

    # Logging
    log_level: str = "WARNING"
    log_format: str = "console"

    # Integrator tolerances
    ode_rtol: float = 1e-10
    ode_atol: float = 1e-12
    quad_epsrel: float = 1e-10

    # Gaussian-state checks
    physicality_tol: float = 1e-9
    # Cross block below this (relative) counts as zero in the mixed frame.
    decoupling_tol: float = 1e-12

    # Floquet analysis
    instability_margin: float = 1e-12
    monodromy_det_tol: float = 1e-6

    # Sweeps
    threads: int = 0

    # Observables
    occurrence_horizon_periods: float = 1e6

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v):
        if v not in ["development", "testing", "production"]:
            raise ValueError("Environment must be one of: development, "
                             "testing, production")
        return v

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v):
        if v not in ["json", "console"]:
            raise ValueError("log_format must be 'json' or 'console'")
        return v

    @field_validator("ode_rtol", "ode_atol", "quad_epsrel",
                     "physicality_tol", "decoupling_tol", "instability_margin",
                     "monodromy_det_tol")
    @classmethod
    def validate_tolerance(cls, v):
        if v < 0:
            raise ValueError("tolerances must be non-negative")
        return v

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v):
        if v < 0:
            raise ValueError("threads must be >= 0 (0 = auto)")
        return v


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Create settings instance
settings = get_settings()
