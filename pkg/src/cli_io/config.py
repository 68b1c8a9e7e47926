import json
import os
from pathlib import Path
from typing import Any, Optional

from src.cli_io.models import ExperimentConfig, GridSpec, OutputFormat

CONFIG_ENV_VAR = "LDP_EXTREMA_CONFIG"
DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "experiment_configs" / "config_default.json"


def resolve_config_path(flag_path: Optional[str] = None) -> Path:
    """--config flag, then the LDP_EXTREMA_CONFIG environment variable, then the bundled default."""
    if flag_path:
        return Path(flag_path)
    if env_path := os.environ.get(CONFIG_ENV_VAR):
        return Path(env_path)
    return DEFAULT_CONFIG_PATH


def load_config(config_path: str | Path) -> dict[str, Any]:
    with open(config_path, "r") as file:
        return json.load(file)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _get_int(config: dict[str, Any], field: str, minimum: int) -> int:
    if not _is_int(value := config.get(field)):
        raise ValueError(f"{field} not found in config or not an integer")
    if value < minimum:
        raise ValueError(f"{field} must be at least {minimum}, got {value}")
    return value


def _get_positive(config: dict[str, Any], field: str) -> float:
    if not _is_number(value := config.get(field)) or not value > 0:
        raise ValueError(f"{field} not found in config or not a positive number")
    return float(value)


def _get_bool(config: dict[str, Any], field: str) -> bool:
    if not isinstance(value := config.get(field), bool):
        raise ValueError(f"{field} not found in config or not a boolean")
    return value


def get_grid_config(config: dict[str, Any], field: str) -> GridSpec:
    grid = config.get(field)
    if not isinstance(grid, dict):
        raise ValueError(f"{field} not found in config")
    low = _get_positive(grid, "low")
    high = _get_positive(grid, "high")
    if high < low:
        raise ValueError(f"{field}.high must not be below {field}.low")
    return GridSpec(low=low, high=high, points=_get_int(grid, "points", minimum=1))


def get_experiment_config(config_path: str | Path) -> ExperimentConfig:
    config = load_config(config_path)

    if (output_format := config.get("format")) not in [f.value for f in OutputFormat]:
        raise ValueError(f"format must be one of csv, json, got {output_format!r}")

    if (density_m := _get_positive(config, "densityM")) <= 1.0:
        raise ValueError(f"densityM must exceed 1, got {density_m}")

    if (seed := _get_int(config, "seed", minimum=0)) >= 2**64:
        raise ValueError("seed must fit in 64 bits")

    log_file_path = config.get("logFilePath")
    if log_file_path is not None and (not isinstance(log_file_path, str) or len(log_file_path) == 0):
        raise ValueError("logFilePath must be a non-empty string when given")

    return ExperimentConfig(
        seed=seed,
        samples=_get_int(config, "samples", minimum=1),
        chunk_size=_get_int(config, "chunkSize", minimum=1),
        workers=_get_int(config, "workers", minimum=1),
        format=OutputFormat(output_format),
        potter_eps=_get_positive(config, "potterEps"),
        t_grid=get_grid_config(config, "tGrid"),
        x_grid=get_grid_config(config, "xGrid") if config.get("xGrid") is not None else None,
        y_grid=get_grid_config(config, "yGrid"),
        density_m=density_m,
        density_points=_get_int(config, "densityPoints", minimum=1),
        log_enabled=_get_bool(config, "logEnabled"),
        log_to_file=_get_bool(config, "logToFile"),
        log_file_path=log_file_path,
    )
