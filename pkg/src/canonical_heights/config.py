import logging
import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "CANONICAL_HEIGHTS_"


class HeightSettings(BaseModel):
    """Tunable defaults shared by the CLI, the MCP tools and the library entry points."""

    model_config = ConfigDict(frozen=True)

    tol: float = Field(1e-12, gt=0)
    real_max_iter: int = Field(64, ge=1)
    padic_max_iter: int = Field(40, ge=1)
    shift_limit: int = Field(64, ge=0)
    precision_retries: int = Field(4, ge=0)
    trial_bound: int = Field(10**5, ge=2)
    factor_bound: int = Field(10**9, ge=2)
    log_level: str = "WARNING"


_ENV_FIELDS = {
    "tol": "TOL",
    "real_max_iter": "REAL_MAX_ITER",
    "padic_max_iter": "PADIC_MAX_ITER",
    "shift_limit": "SHIFT_LIMIT",
    "precision_retries": "PRECISION_RETRIES",
    "trial_bound": "TRIAL_BOUND",
    "factor_bound": "FACTOR_BOUND",
    "log_level": "LOG_LEVEL",
}


def load_settings() -> HeightSettings:
    """Build settings from the environment (and a .env file, if present)."""
    load_dotenv()
    values = {}
    for field_name, suffix in _ENV_FIELDS.items():
        raw = os.getenv(ENV_PREFIX + suffix)
        if raw is not None and raw.strip():
            values[field_name] = raw.strip()
    try:
        return HeightSettings(**values)
    except ValidationError as e:
        bad = ", ".join(ENV_PREFIX + _ENV_FIELDS[str(err["loc"][0])] for err in e.errors())
        raise ValueError(f"Invalid height settings in environment: {bad}") from e


@lru_cache(maxsize=1)
def get_settings() -> HeightSettings:
    settings = load_settings()
    logger.debug("Loaded settings: %s", settings)
    return settings
