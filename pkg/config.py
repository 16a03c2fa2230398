"""
Run Configuration
Resolved settings of one command: flags over config file over environment over defaults
"""

import json
import os
from typing import Any, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from experiments.report import DEFAULT_REQUIRED, DEFAULT_SEEDS, DEFAULT_THRESHOLD
from model.params import ModelError, ModelParams
from samplers.rng import DEFAULT_REJECTION_BUDGET, DEFAULT_SIZE_CAP

load_dotenv()

ENV_VARS = {
    "seed": "HYPERMAP_SEED",
    "jobs": "HYPERMAP_JOBS",
    "size_cap": "HYPERMAP_SIZE_CAP",
    "rejection_budget": "HYPERMAP_REJECTION_BUDGET",
    "threshold": "HYPERMAP_THRESHOLD",
}


class ConfigError(ValueError):
    """Raised when flags, config file and environment do not resolve to a valid run"""


class RunConfig(BaseModel):
    """
    Everything a command needs besides its positional files

    Exactly one of lam, h and m may be given; `params` holds the resolved
    model. Commands that need no model leave all three unset.
    """

    model_config = ConfigDict(extra="forbid")

    command: str
    lam: Optional[float] = None
    h: Optional[float] = None
    m: Optional[float] = None
    params: Optional[ModelParams] = None

    radius: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    jobs: int = 1
    seeds: int = DEFAULT_SEEDS
    required: int = DEFAULT_REQUIRED
    threshold: float = DEFAULT_THRESHOLD
    size_cap: int = DEFAULT_SIZE_CAP
    rejection_budget: int = DEFAULT_REJECTION_BUDGET

    out: Optional[str] = None
    json_path: Optional[str] = None
    csv_path: Optional[str] = None
    pdf_path: Optional[str] = None

    @model_validator(mode="after")
    def resolve_params(self) -> "RunConfig":
        given = {k: v for k, v in (("lam", self.lam), ("h", self.h), ("m", self.m)) if v is not None}
        if len(given) > 1:
            raise ValueError(f"give at most one of --lambda, --h, --m (got {', '.join(sorted(given))})")
        if given and self.params is None:
            key, value = given.popitem()
            try:
                if key == "lam":
                    params = ModelParams.from_lambda(value)
                elif key == "h":
                    params = ModelParams.from_h(value)
                else:
                    params = ModelParams.from_m(value)
            except ModelError as e:
                raise ValueError(str(e)) from e
            self.params = params
        if self.jobs < 1 or self.seeds < 1:
            raise ValueError("jobs and seeds must be positive")
        if not 1 <= self.required <= self.seeds:
            raise ValueError(f"required passes must lie in [1, {self.seeds}], got {self.required}")
        if not 0 < self.threshold < 1:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        return self

    def audit(self) -> str:
        """One JSON line, printed before every command"""
        return self.model_dump_json(exclude_none=True)


def env_settings() -> dict:
    out = {}
    for key, var in ENV_VARS.items():
        raw = os.getenv(var)
        if raw:
            out[key] = raw
    return out


def file_settings(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def load_config(command: str, flags: dict[str, Any], config_path: Optional[str] = None) -> RunConfig:
    """
    Merge the layers of settings into a RunConfig

    Args:
        command: the subcommand name
        flags: values given on the command line; None means "not given"
        config_path: optional JSON object with RunConfig fields

    Returns:
        The validated configuration
    """
    from_file = file_settings(config_path)
    merged: dict[str, Any] = {}
    merged.update(env_settings())
    merged.update(from_file)
    merged.update({k: v for k, v in flags.items() if v is not None})
    merged["command"] = command
    # a parameterization given on a higher layer replaces the others
    for layer in (flags, from_file):
        chosen = [k for k in ("lam", "h", "m") if layer.get(k) is not None]
        if chosen:
            for k in ("lam", "h", "m"):
                if k not in chosen:
                    merged.pop(k, None)
            break
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        raise ConfigError(str(e)) from e
