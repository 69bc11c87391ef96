"""Configuration management using pydantic-settings."""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="QPACK_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Numerical tolerances
    orbit_tolerance: float = Field(
        default=1e-9,
        gt=0,
        description="Per-coordinate tolerance used to deduplicate orbit points",
    )
    boundary_tolerance: float = Field(
        default=1e-9,
        gt=0,
        description="Relative boundary band epsilon_b = tol * max(1, d)",
    )
    seed_snap_tolerance: float = Field(
        default=1e-5,
        ge=0,
        description="Relative distance within which a group element counts as fixing a seed",
    )

    # Enumeration defaults
    threads: int = Field(
        default=1,
        ge=1,
        description="Worker threads used to expand BFS levels",
    )
    max_points: int = Field(
        default=5000,
        ge=1,
        description="Default cap on the number of packing points",
    )
    max_coordinate: int = Field(
        default=64,
        ge=1,
        description="Default cap on |x_j| for every lattice coordinate",
    )

    # Terminal behaviour
    no_spinner: bool = Field(
        default=False,
        description="Disable progress spinners",
    )


# Global settings instance
settings = Settings()
