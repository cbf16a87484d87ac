"""Reading YAML configuration: packaged defaults and experiment spec files.

A configuration file holds a mandatory ``default`` mapping and any number of
named profiles. The active profile is merged over ``default``, and ``$VAR``
references are expanded from the environment.

Inspired by the R package `config` (https://rstudio.github.io/config/).
"""

from __future__ import annotations

import os
import re
from functools import cache
from importlib.resources import files
from pathlib import Path
from typing import Any, overload

import yaml

PROFILE_ENV_VAR = "TSAOM_PROFILE"
DEFAULTS_FILE = "defaults.yml"


class MissingDefaultConfigError(Exception):
    """Raised when the configuration file does not contain a 'default' key."""


def get(
    value: str | None = None,
    config: str | None = None,
    file: str | Path = "tsaom.yml",
    *,
    use_parent: bool = True,
) -> Any:
    """Load and merge configuration settings from a YAML file.

    The ``default`` mapping is merged with the mapping of the selected profile
    (profile keys win). Strings containing ``$VAR`` or mixed content such as
    ``results/$RUN_ID/out`` have their environment variables expanded, in
    nested mappings and lists too.

    Args:
        value: Name of the value to read (None to read all values).
        config: The profile to load. If None, the profile is taken from the
            ``TSAOM_PROFILE`` environment variable, falling back to "default".
        file: Configuration file to read from. A relative name that does not
            exist in the working directory is searched for in parent directories.
        use_parent: True to scan parent directories for configuration files if the
            specified config file isn't found.

    Returns:
        The requested value or a dictionary containing the merged configuration
        settings.

    Raises:
        MissingDefaultConfigError: If the file has no ``default`` section.
        TypeError: If the file or a section is not a mapping.
        FileNotFoundError: If no file could be found.
    """
    config_file = find_config_file(file, use_parent=use_parent)

    if config is None:
        config = os.getenv(PROFILE_ENV_VAR, default="default")

    with config_file.open(mode="r", encoding="utf-8") as config_file_handle:
        config_data: Any = yaml.safe_load(config_file_handle)

    return _merge_profile(config_data, config, source=str(config_file), value=value)


def load_defaults(section: str | None = None) -> Any:
    """Read the defaults shipped with the package.

    Args:
        section: Top-level key to return (e.g. ``"heuristics"``, ``"km"``,
            ``"bench"``, ``"solvers"``); None returns everything.

    Returns:
        The merged defaults, or one section of them.
    """
    config = os.getenv(PROFILE_ENV_VAR, default="default")
    return _merge_profile(_packaged_defaults(), config, source=DEFAULTS_FILE, value=section)


@cache
def _packaged_defaults() -> Any:
    text = files("tsaom").joinpath(DEFAULTS_FILE).read_text(encoding="utf-8")
    return yaml.safe_load(text)


def _merge_profile(config_data: Any, config: str, *, source: str, value: str | None) -> Any:
    if not isinstance(config_data, dict):
        msg = f"Configuration file '{source}' must contain a dictionary."
        raise TypeError(msg)

    if "default" not in config_data:
        msg = f"Configuration file '{source}' does not contain a 'default' key."
        raise MissingDefaultConfigError(msg)

    default_config = config_data["default"]
    environment_config = config_data.get(config, {})

    if not isinstance(environment_config, dict):
        msg = f"Configuration for '{config}' in '{source}' must be a dictionary."
        raise TypeError(msg)

    if isinstance(default_config, dict) and default_config:
        merged_config = {**default_config, **environment_config}
    elif environment_config:
        merged_config = environment_config
    else:
        msg = (
            f"Configuration for either 'default' or '{config}' in '{source}' "
            "must be non-empty dictionaries."
        )
        raise TypeError(msg)

    merged_config = replace_env_vars(merged_config)

    if value is None:
        return merged_config
    return merged_config.get(value)


def find_config_file(file: str | Path, *, use_parent: bool) -> Path:
    """Find the configuration file in the current or parent directories.

    Absolute paths are checked as given.

    Args:
        file: Name or path of the configuration file to search for.
        use_parent: True to scan parent directories for the configuration
            file if it's not found in the current directory.

    Returns:
        The path of the found configuration file.
    """
    path = Path(file)
    if path.is_absolute():
        if path.is_file():
            return path
        msg = f"Configuration file '{file}' not found."
        raise FileNotFoundError(msg)

    current_path: Path | None = Path().cwd()

    while current_path is not None:
        config_file = current_path / path
        if config_file.is_file():
            return config_file

        if not use_parent:
            break

        current_path = current_path.parent if current_path.parent != current_path else None

    msg = f"Configuration file '{file}' not found."
    raise FileNotFoundError(msg)


@overload
def replace_env_vars(data: dict) -> dict: ...
@overload
def replace_env_vars(data: list) -> list: ...
def replace_env_vars(data: dict | list) -> dict | list:
    """Replace environment variables in strings with their values.

    Variables that are not set are replaced with empty strings, except when
    the whole string is a single variable, which is then kept verbatim.

    Args:
        data: Dictionary or list containing configuration data.

    Returns:
        Dictionary or list with environment variables replaced by their values.

    Examples:
        >>> os.environ["RESULTS_DIR"] = "out"
        >>> replace_env_vars({"out_dir": "$RESULTS_DIR/fig2"})
        {'out_dir': 'out/fig2'}
    """
    if isinstance(data, dict):
        return {key: _replace_item(val) for key, val in data.items()}
    if isinstance(data, list):
        return [_replace_item(val) for val in data]

    return data


def _replace_item(item: Any) -> Any:
    if isinstance(item, str) and "$" in item:
        return _expand_env_vars(item)
    if isinstance(item, dict | list):
        return replace_env_vars(item)
    return item


def _expand_env_vars(value: str) -> str:
    pattern = r"\$([A-Z_][A-Z0-9_]*)"

    match = re.fullmatch(pattern, value)
    if match:
        return os.getenv(match.group(1), default=value)

    return re.sub(pattern, lambda found: os.getenv(found.group(1), ""), value)
