"""Configuration management for raagscl.

Handles loading and saving user settings to a JSON file, and builds the
per-run configuration from those settings plus command-line overrides.
"""

import copy
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

SEED_ENV_VAR = "RAAGSCL_SEED"
HOME_ENV_VAR = "RAAGSCL_HOME"

DEFAULT_CONFIG: dict[str, Any] = {
    "max_power": 6,
    "witness_radius": None,
    "samples": 200,
    "oracle_radius": 4,
    "ball_cap": 6,
    "seed": 0,
    "last_graph": "",
    "output_dir": "",
}


def get_config_dir() -> Path:
    """Return platform-appropriate config directory.

    RAAGSCL_HOME overrides everything.
    Windows: %APPDATA%/raagscl
    Linux/Mac: ~/.raagscl
    """
    override = os.environ.get(HOME_ENV_VAR)
    if override:
        return Path(override)
    if sys.platform == "win32":
        appdata = os.environ.get("APPDATA", "")
        return Path(appdata) / "raagscl"
    else:
        return Path.home() / ".raagscl"


def get_config_path() -> Path:
    """Return path to config file."""
    return get_config_dir() / "config.json"


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def validate_config(config: dict[str, Any]) -> tuple[dict[str, Any], list[str]]:
    """Validate config values, reset invalid ones to defaults.

    Args:
        config: Config dict to validate

    Returns:
        Tuple of (validated config, list of warning messages)
    """
    warnings = []

    # max_power (int, 1-12)
    max_power = config.get("max_power")
    if not _is_int(max_power) or max_power < 1 or max_power > 12:
        warnings.append(f"Invalid max_power '{max_power}', reset to default")
        config["max_power"] = DEFAULT_CONFIG["max_power"]

    # witness_radius (null or non-negative int)
    radius = config.get("witness_radius")
    if radius is not None and (not _is_int(radius) or radius < 0):
        warnings.append(f"Invalid witness_radius '{radius}', reset to default")
        config["witness_radius"] = DEFAULT_CONFIG["witness_radius"]

    # ball_cap first: oracle_radius is checked against it
    ball_cap = config.get("ball_cap")
    if not _is_int(ball_cap) or ball_cap < 0 or ball_cap > 8:
        warnings.append(f"Invalid ball_cap '{ball_cap}', reset to default")
        config["ball_cap"] = DEFAULT_CONFIG["ball_cap"]

    oracle_radius = config.get("oracle_radius")
    if not _is_int(oracle_radius) or oracle_radius < 0 or oracle_radius > config["ball_cap"]:
        warnings.append(f"Invalid oracle_radius '{oracle_radius}', reset to default")
        config["oracle_radius"] = min(DEFAULT_CONFIG["oracle_radius"], config["ball_cap"])

    for key in ["samples", "seed"]:
        value = config.get(key)
        if not _is_int(value) or value < 0:
            warnings.append(f"Invalid {key} '{value}', reset to default")
            config[key] = DEFAULT_CONFIG[key]

    for key in ["last_graph", "output_dir"]:
        if not isinstance(config.get(key), str):
            warnings.append(f"Invalid {key} '{config.get(key)}', reset to default")
            config[key] = DEFAULT_CONFIG[key]

    return config, warnings


def load_config() -> dict[str, Any]:
    """Load config from JSON file. Returns defaults for missing keys."""
    config_path = get_config_path()
    config = copy.deepcopy(DEFAULT_CONFIG)

    if config_path.exists():
        try:
            with open(config_path) as f:
                saved = json.load(f)
                config.update(saved)
        except (OSError, json.JSONDecodeError):
            pass

    config, warnings = validate_config(config)
    for warning in warnings:
        # Use print since logger may not be initialized yet
        print(f"Config warning: {warning}")

    return config


def save_config(settings: dict[str, Any]) -> None:
    """Save settings to JSON file.

    Swallows OSError and serialization errors with a printed warning,
    matching load_config.
    """
    try:
        config_dir = get_config_dir()
        config_dir.mkdir(parents=True, exist_ok=True)
        config_path = get_config_path()
        with open(config_path, "w") as f:
            json.dump(settings, f, indent=2)
    except (OSError, TypeError, ValueError) as e:
        print(f"Failed to save config: {e}")


def seed_from_environment(default: int) -> int:
    """Return the sampler seed from RAAGSCL_SEED, or default when unset or invalid."""
    raw = os.environ.get(SEED_ENV_VAR, "").strip()
    if not raw:
        return default
    try:
        seed = int(raw)
    except ValueError:
        print(f"Config warning: ignoring non-integer {SEED_ENV_VAR}='{raw}'")
        return default
    return seed if seed >= 0 else default


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI run needs."""

    graph_path: Path | None  # JSON graph file; None means use `fixture`
    word: str
    fixture: str | None = None  # name from graph_io.FIXTURE_GRAPHS
    max_power: int = 6  # N, largest power tabulated in a certificate
    witness_radius: int | None = None  # None: per-interval default
    samples: int = 200  # per property suite
    oracle_radius: int = 4
    ball_cap: int = 6
    seed: int = 0
    output: Path | None = None

    def __post_init__(self) -> None:
        if self.max_power < 1:
            raise ValueError(f"max_power must be >= 1, got {self.max_power}")
        if self.samples < 0:
            raise ValueError(f"samples must be >= 0, got {self.samples}")
        if self.witness_radius is not None and self.witness_radius < 0:
            raise ValueError(f"witness_radius must be >= 0, got {self.witness_radius}")
        if self.oracle_radius < 0:
            raise ValueError(f"oracle_radius must be >= 0, got {self.oracle_radius}")

    @classmethod
    def from_settings(cls, settings: dict[str, Any], **overrides: Any) -> "RunConfig":
        """Build a RunConfig from loaded settings; non-None overrides win.

        Args:
            settings: Dict as returned by load_config()
            **overrides: Field values from the command line (None means "not given")

        Returns:
            The merged RunConfig
        """
        values: dict[str, Any] = {
            "graph_path": Path(settings["last_graph"]) if settings.get("last_graph") else None,
            "word": "",
            "max_power": settings["max_power"],
            "witness_radius": settings["witness_radius"],
            "samples": settings["samples"],
            "oracle_radius": settings["oracle_radius"],
            "ball_cap": settings["ball_cap"],
            "seed": seed_from_environment(settings["seed"]),
            "output": None,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)
