"""
Application Configuration Module
Handles environment variables and run-time defaults.
"""

from functools import lru_cache
from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


BUNDLED_DATA_DIR = Path(__file__).resolve().parent.parent / "dataio" / "data"


class Settings(BaseSettings):
    """
    Settings loaded from STAGE_SURVIVAL_* environment variables or a .env file.
    """
    model_config = SettingsConfigDict(
        env_prefix="STAGE_SURVIVAL_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Data files
    data_dir: Path = BUNDLED_DATA_DIR
    default_params_file: str = "default_params.json"
    default_targets_file: str = "seer_2014_2020.csv"

    # Monte Carlo
    mc_cohort_size: int = 10_000
    mc_max_steps: int = 100
    mc_workers: int = 1
    default_seed: int = 2025

    # Calibration
    fit_restarts: int = 20
    fit_max_iter: int = 2000
    fit_xatol: float = 1e-9
    fit_fatol: float = 1e-14
    degeneracy_penalty: float = 1e6

    # Output
    significant_digits: int = 15

    # Application
    debug: bool = False
    app_name: str = "stage-survival"
    app_version: str = "1.0.0"

    @property
    def default_params_path(self) -> Path:
        return self.data_dir / self.default_params_file

    @property
    def default_targets_path(self) -> Path:
        return self.data_dir / self.default_targets_file


@lru_cache()
def get_settings() -> Settings:
    """
    Returns cached settings instance.
    Using lru_cache ensures settings are only loaded once.
    """
    return Settings()


settings = get_settings()
