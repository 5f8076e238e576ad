"""
Search and tolerance profiles, and configuration loading for ellk3-stab
"""

import json
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from dotenv import load_dotenv

from .errors import HypothesisViolated, ParseError
from .lattice import SurfaceParams, as_fraction

OUTPUT_FORMATS = ("json", "csv", "svg", "png")

PROFILES = {
    "desk": {
        "bounds": (3, 3, 3),
        "tolerance": 1e-9,
        "threads": 1,
        "fuzz_samples": 20,
        "pair_samples": 200,
        "description": "Quick checks on a laptop: small search box, light fuzzing"
    },
    "thorough": {
        "bounds": (8, 8, 8),
        "tolerance": 1e-12,
        "threads": 4,
        "fuzz_samples": 500,
        "pair_samples": 5000,
        "description": "Large search box, tight tolerance, 4 worker threads"
    },
    "acceptance": {
        "bounds": (5, 5, 5),
        "tolerance": 1e-9,
        "threads": 1,
        "fuzz_samples": 100,
        "pair_samples": 1000,
        "description": "Sample sizes and bounds of the acceptance suite"
    }
}

ENV_PROFILE = "ELLK3_STAB_PROFILE"
ENV_THREADS = "ELLK3_STAB_THREADS"
ENV_TOLERANCE = "ELLK3_STAB_TOLERANCE"


def get_profile(profile_name: str) -> dict:
    """
    Get profile settings by name

    Args:
        profile_name: Name of the profile (desk, thorough, acceptance)

    Returns:
        Dictionary with profile settings

    Raises:
        ValueError: If profile name is not recognized
    """
    if profile_name not in PROFILES:
        raise ValueError(
            f"Unknown profile: {profile_name}. "
            f"Available profiles: {', '.join(PROFILES.keys())}"
        )
    return PROFILES[profile_name].copy()


def list_profiles() -> list:
    return list(PROFILES.keys())


def get_profile_description(profile_name: str) -> str:
    if profile_name not in PROFILES:
        return f"Unknown profile: {profile_name}"
    return PROFILES[profile_name].get("description", "No description")


@dataclass
class Config:
    """
    Resolved run settings

    Raises:
        HypothesisViolated: If tolerance <= 0, threads < 1 or the format is unknown
    """

    e: Fraction = Fraction(2)
    tolerance: float = 1e-9
    output_format: str = "json"
    seed: int = 0
    threads: int = 1
    bounds: Tuple[int, int, int] = (5, 5, 5)
    strong_bg: bool = False
    fuzz_samples: int = 100
    pair_samples: int = 1000
    profile: Optional[str] = None

    def __post_init__(self):
        self.e = as_fraction(self.e)
        self.bounds = tuple(int(b) for b in self.bounds)
        if self.tolerance <= 0:
            raise HypothesisViolated(f"tolerance must be positive, got {self.tolerance}")
        if self.threads < 1:
            raise HypothesisViolated(f"threads must be at least 1, got {self.threads}")
        if self.output_format not in OUTPUT_FORMATS:
            raise HypothesisViolated(
                f"Unknown output format: {self.output_format}. "
                f"Available formats: {', '.join(OUTPUT_FORMATS)}"
            )

    @property
    def surface(self) -> SurfaceParams:
        return SurfaceParams(self.e)


_CONFIG_KEYS = {"e", "tolerance", "output_format", "seed", "threads", "bounds", "strong_bg",
                "fuzz_samples", "pair_samples"}


def _file_settings(config_path: Optional[str]) -> Dict[str, Any]:
    path = config_path or "config.json"
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(f"Malformed config file {path}: {e}") from e
    defaults = data.get("default_settings", {}) if isinstance(data, dict) else None
    if not isinstance(defaults, dict):
        raise ParseError(f"Malformed config file {path}: default_settings must be an object")
    return {k: v for k, v in defaults.items() if k in _CONFIG_KEYS}


def _env_number(name: str, kind):
    """Parse a numeric environment variable; warn and ignore bad values"""
    raw = os.getenv(name)
    if not raw:
        return None
    try:
        value = kind(raw)
    except ValueError:
        value = None
    if value is None or value <= 0:
        warnings.warn(f"Invalid value '{raw}' in {name}; ignoring it")
        return None
    return value


def _env_settings() -> Dict[str, Any]:
    settings = {}
    tolerance = _env_number(ENV_TOLERANCE, float)
    if tolerance is not None:
        settings["tolerance"] = tolerance
    return settings


def load_config(overrides: Optional[Dict[str, Any]] = None, profile: Optional[str] = None,
                config_path: Optional[str] = None) -> Config:
    """
    Resolve settings from every source

    Priority: overrides (CLI flags) > profile > environment > config.json
    default_settings > built-in defaults. None-valued overrides are ignored.

    Args:
        overrides: Explicit settings, typically from the command line
        profile: Profile name; falls back to ELLK3_STAB_PROFILE
        config_path: Path of the JSON config (default ./config.json)

    Returns:
        Validated Config

    Raises:
        ValueError: If an explicitly requested profile is unknown
        ParseError: If the config file is not valid JSON
    """
    # Load environment variables from .env file
    load_dotenv()

    settings: Dict[str, Any] = {}
    settings.update(_file_settings(config_path))
    settings.update(_env_settings())

    profile_name = profile
    if profile_name is None:
        profile_name = os.getenv(ENV_PROFILE)
        if profile_name and profile_name not in PROFILES:
            warnings.warn(f"Invalid profile '{profile_name}' in {ENV_PROFILE}; "
                          f"continuing with default settings")
            profile_name = None
    if profile_name:
        profile_settings = get_profile(profile_name)
        profile_settings.pop("description", None)
        settings.update(profile_settings)

    settings.update({k: v for k, v in (overrides or {}).items() if v is not None})
    cap = _env_number(ENV_THREADS, int)
    if cap is not None:
        settings["threads"] = min(settings.get("threads", 1), cap)
    return Config(profile=profile_name, **settings)
