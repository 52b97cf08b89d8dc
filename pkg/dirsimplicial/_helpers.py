"""Internal module for some helping functions across library. Logger setup, config resolution, config files
and config hash."""

from __future__ import annotations
from typing import Any
from pathlib import Path
import configparser
import hashlib
import json

import mylogging
from mypythontools.config import ConfigBase, ConfigStructured
from mypythontools.misc import str_to_infer_type

from .configuration import Config, config as config_default
from ._errors import ConfigValidationError


def logger_init_from_config(logger_config: Config.Output.LoggerSubconfig) -> None:
    mylogging.config.OUTPUT = logger_config.logger_output
    mylogging.config.LEVEL = logger_config.logger_level
    mylogging.config.FILTER = logger_config.logger_filter
    mylogging.config.COLORIZE = logger_config.logger_color


def sections(config: Config) -> dict[str, str]:
    """Dotted section path of every config value, e.g. ``{"epochs": "training", ...}``."""
    result = {}

    def walk(subconfig, prefix: str) -> None:
        for name, attribute in vars(type(subconfig)).items():
            if isinstance(attribute, property):
                result[name] = prefix
        for name, value in vars(subconfig).items():
            if isinstance(value, (ConfigBase, ConfigStructured)):
                walk(value, f"{prefix}.{name}" if prefix else name)

    walk(config, "")
    return result


def apply_values(config: Config, values: dict[str, Any]) -> None:
    """Update config with validation.

    Raises:
        ConfigValidationError: With path like ``training.epochs`` if key is unknown or value is invalid.
    """
    paths = sections(config)

    for key, value in values.items():
        if key not in paths:
            raise ConfigValidationError(f"Unknown config value '{key}'.", key)
        try:
            setattr(config, key, value)
        except (TypeError, KeyError, ValueError, AttributeError) as err:
            raise ConfigValidationError(str(err), f"{paths[key]}.{key}" if paths[key] else key) from err


def validate_config(config: Config) -> None:
    """Check values that types alone can not check."""
    for grid in ("layers_grid", "width_grid", "snr_grid", "used_models"):
        if not getattr(config, grid):
            raise ConfigValidationError("Grid must not be empty.", f"{sections(config)[grid]}.{grid}")

    ratios = config.split_ratios
    if len(ratios) != 3 or abs(sum(ratios) - 1) > 1e-9 or min(ratios) < 0:
        raise ConfigValidationError(
            "Three non-negative ratios summing to 1 expected.", "data_input.split_ratios"
        )

    if config.nodes % config.communities:
        raise ConfigValidationError(
            f"{config.nodes} nodes can not be uniformly divided into {config.communities} communities.",
            "data_input.nodes",
        )

    for name in ("p_in", "p_out"):
        if not 0 <= getattr(config, name) <= 1:
            raise ConfigValidationError("Probability must be in [0, 1].", f"data_input.{name}")

    for name in ("seeds", "epochs", "batch", "signals", "max_dim"):
        if getattr(config, name) < 1:
            raise ConfigValidationError("Must be positive.", f"{sections(config)[name]}.{name}")


def resolve_config(config: Config | dict | None = None, **kwargs) -> Config:
    """Copy of config (default one if None) with preset and kwargs applied. Kwargs have the highest priority."""
    if config is None or isinstance(config, dict):
        update_config = config
        config = config_default.copy()
        if update_config:
            apply_values(config, update_config)

    elif isinstance(config, Config):
        config = config.copy()

    preset = kwargs.get("use_config_preset", config.use_config_preset)
    if preset and preset != "none":
        if preset not in Config.presets:
            raise ConfigValidationError(f"Unknown preset '{preset}'.", "general.use_config_preset")
        apply_values(config, Config.presets[preset])

    apply_values(config, kwargs)
    validate_config(config)
    logger_init_from_config(config.output.logger_subconfig)

    return config


def loads_config_file(text: str, path: str | None = None) -> dict[str, Any]:
    """Parse sectioned key / value config file. Values are parsed as python literals where possible.

    Examples:
        >>> loads_config_file("[training]\\nepochs = 10\\n[data_input]\\nsnr_grid = [-5, 0]\\n")
        {'epochs': 10, 'snr_grid': [-5, 0]}
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # type: ignore

    try:
        parser.read_string(text, source=path or "<config>")
    except configparser.Error as err:
        raise ConfigValidationError(f"Config file can not be parsed. {err}", path) from err

    known = sections(config_default)
    values = {}

    for section in parser.sections():
        for key, value in parser.items(section):
            if key not in known:
                raise ConfigValidationError(f"Unknown config value '{key}'.", f"{section}.{key}")
            if known[key] != section and known[key].split(".")[-1] != section:
                raise ConfigValidationError(f"Value belongs to section '{known[key]}'.", f"{section}.{key}")
            values[key] = str_to_infer_type(value)

    return values


def load_config_file(path: str | Path) -> dict[str, Any]:
    return loads_config_file(Path(path).read_text(), str(path))


def dumps_config(config: Config) -> str:
    """Config as sectioned file that `loads_config_file` can read. Sections and keys are sorted."""
    values = config.get_dict()
    by_section: dict[str, list[str]] = {}

    for key, section in sections(config).items():
        value = values[key]
        text = str(value) if isinstance(value, Path) else value if isinstance(value, str) else repr(value)
        by_section.setdefault(section.split(".")[-1] or "general", []).append(f"{key} = {text}")

    blocks = [f"[{section}]\n" + "\n".join(sorted(lines)) for section, lines in sorted(by_section.items())]
    return "\n\n".join(blocks) + "\n"


def config_hash(config: Config) -> str:
    """Sha256 of canonical config dump. Two configs with the same values have the same hash."""
    canonical = json.dumps(config.get_dict(), sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
