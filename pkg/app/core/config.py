import math
from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Application
    APP_NAME: str = "bantqmc"
    DEBUG: bool = False
    API_VERSION: str = "v1"
    LOG_LEVEL: str = "INFO"

    # Database (run records)
    DATABASE_URL: str = "sqlite:///./bantqmc.db"

    # Server
    HOST: str = "0.0.0.0"
    PORT: int = 8000

    # Digit arithmetic
    DIGIT_DEPTH: Optional[int] = None

    # Sobol' direction numbers; None selects the Joe-Kuo table bundled with SciPy
    SOBOL_DIRECTION_FILE: Optional[str] = None

    # Guards
    MAX_ENUMERATION: int = 2**22
    MAX_EXHAUSTIVE_CANDIDATES: int = 2**20
    MAX_WCE_POINTS: int = 2**13

    # Generating-vector search
    TRUNCATION_OFFSET: int = 4
    SEARCH_WORKERS: int = 1

    # Convergence study
    SLOPE_WINDOW: int = 5

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()


def get_settings() -> Settings:
    """Return the process-wide settings object."""
    return settings


def default_depth(b: int) -> int:
    """Largest digit depth whose zero-tail points are exact in binary64."""
    return int(math.floor(53 * math.log(2) / math.log(b) + 1e-12))


def resolve_depth(b: int, depth: Optional[int] = None) -> int:
    """
    Digit depth W for base b: explicit value, else DIGIT_DEPTH, else the
    per-base default.
    """
    if depth is not None:
        return depth
    if settings.DIGIT_DEPTH is not None:
        return settings.DIGIT_DEPTH
    return default_depth(b)
