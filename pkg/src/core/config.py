"""
Core configuration management using Pydantic BaseSettings.
Every value has a typed default; command-line flags are the only override.
"""

from pathlib import Path
from typing import List, Tuple, Type

from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from .errors import InputError

DATA_DIRECTORY = Path(__file__).resolve().parent.parent / "data"


class Settings(BaseSettings):
    """Application settings. Environment variables are not read."""

    model_config = SettingsConfigDict(validate_assignment=True, extra="forbid")

    # Application
    app_name: str = "signbound"
    version: str = "1.0.0"
    debug: bool = False
    log_level: str = "WARNING"

    # Sign space
    dimension: int = Field(default=9, ge=1)
    max_dimension: int = Field(default=16, ge=1)

    # Parallel work
    jobs: int = Field(default=1, ge=1)

    # Shipped data
    data_directory: Path = DATA_DIRECTORY
    main_scheme_file: str = "main_scheme.json"
    row_scheme_file: str = "row_scheme.txt"
    certificate_files: List[str] = ["tuplet_certificates.json", "leg_certificates.json"]
    witness_file: str = "leg_witnesses.json"

    # File loading
    max_file_size: int = 2 * 1024 * 1024  # 2MB
    allowed_file_types: List[str] = [".json", ".txt"]

    # Sampling
    sample_numerator_bound: int = Field(default=1000, ge=1)
    sample_denominator_bound: int = Field(default=1000, ge=1)
    sample_batch_size: int = Field(default=1000, ge=1)

    # Solver
    qp_grid_resolution: int = Field(default=12, ge=1)

    # Output
    report_indent: int = 2

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    def data_path(self, name: str) -> Path:
        """Resolve a shipped data file name against the data directory."""
        return self.data_directory / name


def apply_overrides(**overrides) -> Settings:
    """Apply command-line overrides to the global settings in place.

    None values are skipped so unset flags keep their defaults.
    """
    for key, value in overrides.items():
        if value is None:
            continue
        try:
            setattr(settings, key, value)
        except ValidationError as e:
            raise InputError(f"invalid value for {key}: {e.errors()[0]['msg']}")
    return settings


# Global settings instance
settings = Settings()
