"""Code related to the config that strata-lab uses."""
from __future__ import annotations
import yaml
import os
import logging
from typing import Any, Optional, Union
from lib.types import CONFIG_DICT_TYPE

logger = logging.getLogger(__name__)

TOLERANCE_ENVIRONMENT_VARIABLE = "STRATA_LAB_TOL"


class Configuration:
    """The config or a sub-config that strata-lab uses."""

    def __init__(self, parameters: CONFIG_DICT_TYPE) -> None:
        """:param parameters: A `dict` containing the config."""
        self.config = parameters

    def __getattr__(self, name: str) -> Any:
        """
        Enable the use of `config.key1.key2`.

        :param name: The key to get its value.
        :return: The value of the key.
        """
        return self.lookup(name)

    def lookup(self, name: str) -> Any:
        """
        Get the value of a key.

        :param name: The key to get its value.
        :return: `Configuration` if the value is a `dict` else returns the value.
        """
        data = self.config.get(name)
        return Configuration(data) if isinstance(data, dict) else data

    def keys(self) -> list[str]:
        """:return: All of the keys in this config."""
        return list(self.config.keys())

    def __or__(self, other: Union[Configuration, CONFIG_DICT_TYPE]) -> Configuration:
        """Create a copy of this configuration that is updated with values from the parameter."""
        other_dict = other.config if isinstance(other, Configuration) else other
        return Configuration(self.config | other_dict)

    def __bool__(self) -> bool:
        """Whether `self.config` is empty."""
        return bool(self.config)


class ConfigError(ValueError):
    """The config file is missing or holds a value strata-lab cannot use."""

    def __init__(self, message: str, code: str = "config.invalid") -> None:
        """:param code: The error code printed by the command line."""
        super().__init__(message)
        self.code = code


def config_assert(assertion: bool, error_message: str) -> None:
    """Raise an exception if an assertion is false."""
    if not assertion:
        raise ConfigError(error_message)


def config_warn(assertion: bool, warning_message: str) -> None:
    """Log a warning if an assertion is false."""
    if not assertion:
        logger.warning(warning_message)


def set_config_default(config: CONFIG_DICT_TYPE, *sections: str, key: str, default: Any,
                       force_empty_values: bool = False) -> CONFIG_DICT_TYPE:
    """
    Fill a specific config key with the default value if it is missing.

    :param config: The config.
    :param sections: The sections that the key is in.
    :param key: The key to set.
    :param default: The default value.
    :param force_empty_values: Whether an empty value should be replaced with the default value.
    :return: The new config with the default value inserted if needed.
    """
    subconfig = config
    for section in sections:
        parent = subconfig
        subconfig = parent.setdefault(section, {})
        if subconfig is None:
            subconfig = parent[section] = {}
        if not isinstance(subconfig, dict):
            raise ConfigError(f"The {section} section in {sections} should hold a set of key-value pairs, not a value.")
    if force_empty_values:
        if subconfig.get(key) in [None, ""]:
            subconfig[key] = default
    else:
        subconfig.setdefault(key, default)
    return subconfig


def insert_default_values(CONFIG: CONFIG_DICT_TYPE) -> None:
    """
    Insert the default values of all keys to the config if they are missing.

    :param CONFIG: The config.
    """
    set_config_default(CONFIG, "geometry", key="tolerance", default=1e-9, force_empty_values=True)
    set_config_default(CONFIG, "torus", key="tolerance", default=1e-9, force_empty_values=True)
    set_config_default(CONFIG, "torus", key="samples", default=512, force_empty_values=True)
    set_config_default(CONFIG, "torus", key="clearance", default=0.05, force_empty_values=True)
    set_config_default(CONFIG, "torus", key="grid_size", default=48, force_empty_values=True)
    set_config_default(CONFIG, "torus", key="max_newton_iterations", default=100, force_empty_values=True)
    set_config_default(CONFIG, "torus", key="max_lattice_rows", default=4096, force_empty_values=True)
    set_config_default(CONFIG, "torus", key="max_bisections", default=40, force_empty_values=True)
    set_config_default(CONFIG, "torus", key="foliation_grid", default=64, force_empty_values=True)
    set_config_default(CONFIG, "orbit", key="max_genus", default=30, force_empty_values=True)
    set_config_default(CONFIG, "report", key="indent", default=2, force_empty_values=True)


def apply_environment(CONFIG: CONFIG_DICT_TYPE) -> None:
    """Let `STRATA_LAB_TOL` override the tolerances from the file."""
    override = os.environ.get(TOLERANCE_ENVIRONMENT_VARIABLE)
    if not override:
        return
    try:
        tolerance = float(override)
    except ValueError:
        raise ConfigError(f"{TOLERANCE_ENVIRONMENT_VARIABLE}=`{override}` is not a decimal number.")
    logger.debug(f"Tolerance overridden by {TOLERANCE_ENVIRONMENT_VARIABLE}: {tolerance}")
    set_config_default(CONFIG, "geometry", key="tolerance", default=tolerance)["tolerance"] = tolerance
    set_config_default(CONFIG, "torus", key="tolerance", default=tolerance)["tolerance"] = tolerance


def log_config(CONFIG: CONFIG_DICT_TYPE) -> None:
    """
    Log the config to make debugging easier.

    :param CONFIG: The config.
    """
    logger.debug(f"Config:\n{yaml.dump(CONFIG, sort_keys=False)}")
    logger.debug("====================")


def validate_config(CONFIG: CONFIG_DICT_TYPE) -> None:
    """Check if the config is valid."""
    for section in ["geometry", "torus"]:
        tolerance = CONFIG[section]["tolerance"]
        config_assert(isinstance(tolerance, (int, float)) and 0 < tolerance < 1e-3,
                      f"`{section}:tolerance` must be a positive number below 1e-3, not `{tolerance}`.")
        config_warn(tolerance >= 1e-14,
                    f"`{section}:tolerance` of {tolerance} is close to machine precision; checks may fail spuriously.")

    torus = CONFIG["torus"]
    config_assert(isinstance(torus["samples"], int) and torus["samples"] >= 16,
                  f"`torus:samples` must be an integer of at least 16, not `{torus['samples']}`.")
    config_assert(0 < torus["clearance"] < 0.25,
                  f"`torus:clearance` must lie strictly between 0 and 0.25, not `{torus['clearance']}`.")
    config_assert(isinstance(torus["grid_size"], int) and torus["grid_size"] >= 8,
                  f"`torus:grid_size` must be an integer of at least 8, not `{torus['grid_size']}`.")
    for key in ["max_newton_iterations", "max_lattice_rows", "max_bisections", "foliation_grid"]:
        config_assert(isinstance(torus[key], int) and torus[key] > 0,
                      f"`torus:{key}` must be a positive integer, not `{torus[key]}`.")

    max_genus = CONFIG["orbit"]["max_genus"]
    config_assert(isinstance(max_genus, int) and 1 <= max_genus <= 30,
                  f"`orbit:max_genus` must be an integer from 1 to 30, not `{max_genus}`.")


def default_config() -> Configuration:
    """:return: The built-in configuration, with the environment override applied."""
    CONFIG: CONFIG_DICT_TYPE = {}
    insert_default_values(CONFIG)
    apply_environment(CONFIG)
    validate_config(CONFIG)
    return Configuration(CONFIG)


def load_config(config_file: Optional[str], required: bool = False) -> Configuration:
    """
    Read the config.

    :param config_file: The filename of the config (usually `config.yml`). If it is `None` or the file does not
        exist, the built-in defaults are used.
    :param required: Whether a missing file is an error rather than a reason to use the defaults.
    :return: A `Configuration` object containing the config.
    """
    if not config_file or not os.path.isfile(config_file):
        if config_file and required:
            raise ConfigError(f"There is no config file at {config_file}.", "config.file_not_found")
        if config_file:
            logger.debug(f"No config file at {config_file}; using defaults.")
        return default_config()

    with open(config_file) as stream:
        try:
            CONFIG = yaml.safe_load(stream) or {}
        except yaml.YAMLError as error:
            logger.debug(f"There appears to be a syntax problem with {config_file}")
            raise ConfigError(f"{config_file} is not valid YAML: {error}")
    if not isinstance(CONFIG, dict):
        raise ConfigError(f"{config_file} should hold sections of key-value pairs, not a single value.")

    insert_default_values(CONFIG)
    apply_environment(CONFIG)
    log_config(CONFIG)
    validate_config(CONFIG)

    return Configuration(CONFIG)
