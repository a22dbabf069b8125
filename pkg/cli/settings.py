"""Runtime settings read from the environment (and a .env file when present)."""

import os
from pathlib import Path
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from pascal.matrices import MAX_MATRIX_EXPONENT
from torus.builder import MAX_ARRAY_EXPONENT
from verifier.perfectness import DEFAULT_MAX_WITNESSES


class Settings(BaseModel):
    """Limits and logging options for one run."""

    threads: int = Field(1, ge=1, description="Worker threads for verification and census")
    max_matrix_exponent: int = Field(MAX_MATRIX_EXPONENT, ge=0)
    max_array_exponent: int = Field(MAX_ARRAY_EXPONENT, ge=1)
    max_witnesses: int = Field(DEFAULT_MAX_WITNESSES, ge=0, description="Failing parts reported per level")
    log_level: Literal["debug", "info", "warning", "error"] = "warning"
    log_json: bool = False


def load_settings(env_file: Optional[Path] = None) -> Settings:
    """Load .env, then read the TORUS_* variables."""
    load_dotenv(env_file)
    return Settings(
        threads=int(os.getenv("TORUS_THREADS", str(os.cpu_count() or 1))),
        max_matrix_exponent=int(os.getenv("TORUS_MAX_MATRIX_EXPONENT", str(MAX_MATRIX_EXPONENT))),
        max_array_exponent=int(os.getenv("TORUS_MAX_ARRAY_EXPONENT", str(MAX_ARRAY_EXPONENT))),
        max_witnesses=int(os.getenv("TORUS_MAX_WITNESSES", str(DEFAULT_MAX_WITNESSES))),
        log_level=os.getenv("TORUS_LOG_LEVEL", "warning").lower(),
        log_json=os.getenv("TORUS_LOG_JSON", "false").lower() == "true",
    )
