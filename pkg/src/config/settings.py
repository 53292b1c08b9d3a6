"""
Application settings and configuration.
"""
import logging
import os

from dotenv import load_dotenv

from ..models.inference_models import SolverConfig

# Load environment variables from .env file (for local development)
load_dotenv()

logger = logging.getLogger(__name__)

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def get_setting(key: str, default: str = "") -> str:
    """
    Get a setting from the environment.

    Priority:
    1. Environment variables (a .env file is loaded into them on import)
    2. Default value
    """
    return os.getenv(key, default)


class Settings:
    """Application configuration settings."""

    # Application Settings
    LOG_LEVEL: str = get_setting("LOG_LEVEL", "INFO").upper()

    # Localization defaults
    DEFAULT_N_SAMPLES: int = int(get_setting("DEFAULT_N_SAMPLES", "500"))
    DEFAULT_OBSERVED_FRACTION: float = float(get_setting("DEFAULT_OBSERVED_FRACTION", "0.1"))
    DEFAULT_WINDOW: float = float(get_setting("DEFAULT_WINDOW", "10.0"))

    # Rate inference
    SOLVER_STEP_SIZE: float = float(get_setting("SOLVER_STEP_SIZE", "0.1"))
    SOLVER_MAX_ITERS: int = int(get_setting("SOLVER_MAX_ITERS", "2000"))
    SOLVER_TOLERANCE: float = float(get_setting("SOLVER_TOLERANCE", "1e-9"))
    SOLVER_PRUNE_THRESHOLD: float = float(get_setting("SOLVER_PRUNE_THRESHOLD", "1e-4"))
    SOLVER_INITIAL_RATE: float = float(get_setting("SOLVER_INITIAL_RATE", "0.5"))

    # Test-cascade filtering
    MIN_CASCADE_LEN: int = int(get_setting("MIN_CASCADE_LEN", "27"))
    MAX_RESIMULATIONS: int = int(get_setting("MAX_RESIMULATIONS", "200"))

    @classmethod
    def get_solver_config(cls, **overrides) -> SolverConfig:
        """
        Solver settings from the environment, with keyword overrides.

        Args:
            **overrides: SolverConfig fields to replace; None values are ignored

        Returns:
            SolverConfig
        """
        values = {
            "step_size": cls.SOLVER_STEP_SIZE,
            "max_iters": cls.SOLVER_MAX_ITERS,
            "tolerance": cls.SOLVER_TOLERANCE,
            "prune_threshold": cls.SOLVER_PRUNE_THRESHOLD,
            "initial_rate": cls.SOLVER_INITIAL_RATE,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return SolverConfig(**values)

    @classmethod
    def validate(cls) -> bool:
        """
        Check setting ranges.

        Raises:
            ValueError: If a setting is out of range
        """
        if cls.LOG_LEVEL not in _LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL must be one of {list(_LOG_LEVELS)}, got {cls.LOG_LEVEL!r}")
        if cls.DEFAULT_N_SAMPLES < 1:
            raise ValueError("DEFAULT_N_SAMPLES must be >= 1")
        if not 0 < cls.DEFAULT_OBSERVED_FRACTION <= 1:
            raise ValueError("DEFAULT_OBSERVED_FRACTION must be in (0, 1]")
        if not cls.DEFAULT_WINDOW > 0:
            raise ValueError("DEFAULT_WINDOW must be positive")
        if cls.MIN_CASCADE_LEN < 1 or cls.MAX_RESIMULATIONS < 1:
            raise ValueError("MIN_CASCADE_LEN and MAX_RESIMULATIONS must be >= 1")
        cls.get_solver_config()
        return True


# Singleton instance
settings = Settings()

# Validate on import
try:
    settings.validate()
except ValueError as e:
    logger.warning("Invalid settings: %s", e)
