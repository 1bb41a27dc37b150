from typing import Dict, Any, List, Optional
from pathlib import Path
import copy
import json
import logging
import os

from dotenv import load_dotenv

from ..errors import ConfigError

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

load_dotenv()

WORKERS_ENV = "DUNKL_ANALYZER_WORKERS"
REGISTRY_ENV = "DUNKL_ANALYZER_REGISTRY"
DEFAULT_REGISTRY = "baselines.db"

DEFAULT_CONFIG: Dict[str, Any] = {
    "lambdas": [0.0, 0.5, 1.0, 2.5],
    "grid": {
        "t_max_base": 12.0,
        "t_max_per_lambda": 4.0,
        "panels": 48,
        "order": 16,
    },
    "angular_nodes": 64,
    "checks": ["all"],
    "sweeps": {
        "t": [0.0, 0.5, 1.0, 2.0, 3.5, 5.0],
        "delta": [0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0],
        "sigma": [1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
        "n": [2, 4, 8, 16, 32],
        "p": [1.0, 2.0, 4.0, "inf"],
        "nikolskii_sigma": [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0],
        "rho": [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0],
        "x": [0.25, 0.5, 1.0, 2.0, 3.0],
        "gamma": [0.3, 0.8, 1.7],
    },
    "tolerances": {
        "band": 0.1,
        "quadrature": 1.0e-6,
    },
    "registry": None,
    "output": "reports",
    "seed": 0,
    "perturbations": 20,
    "expensive": False,
}

_GROUP_KEYS = {
    "grid": {"t_max_base": float, "t_max_per_lambda": float, "panels": int, "order": int},
    "tolerances": {"band": float, "quadrature": float},
}


def parse_exponent(value: Any) -> float:
    """Exponent from JSON: a number, or "inf" for the sup norm"""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return float("inf")
        raise ValueError(f"Not an exponent: '{value}'")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"Not an exponent: {value!r}")
    return float(value)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _merge_defaults(config: Dict[str, Any], defaults: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(defaults)
    for key, value in config.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = value
    return merged


def validate_config(config: Dict[str, Any]) -> None:
    """
    Schema check of a merged configuration

    Raises:
        ConfigError: With the path of the first offending field
    """
    unknown = sorted(set(config) - set(DEFAULT_CONFIG))
    if unknown:
        raise ConfigError(f"Unknown key '{unknown[0]}'", field=unknown[0])

    lambdas = config["lambdas"]
    if not isinstance(lambdas, list) or not lambdas:
        raise ConfigError("Expected a non-empty list of Bessel indices", field="lambdas")
    for i, lam in enumerate(lambdas):
        if not _is_number(lam) or lam < -0.5:
            raise ConfigError(f"Bessel index must be a number >= -1/2, got {lam!r}", field=f"lambdas[{i}]")

    for group, keys in _GROUP_KEYS.items():
        if not isinstance(config[group], dict):
            raise ConfigError("Expected an object", field=group)
        for key in config[group]:
            if key not in keys:
                raise ConfigError(f"Unknown key '{key}'", field=f"{group}.{key}")
        for key, kind in keys.items():
            value = config[group][key]
            if not _is_number(value) or (kind is int and int(value) != value) or value <= 0:
                raise ConfigError(f"Expected a positive {kind.__name__}, got {value!r}", field=f"{group}.{key}")

    order = config["grid"]["order"]
    if not 4 <= order <= 64:
        raise ConfigError(f"Gauss order must lie in [4, 64], got {order}", field="grid.order")
    if not isinstance(config["angular_nodes"], int) or config["angular_nodes"] < 2:
        raise ConfigError("Expected an integer >= 2", field="angular_nodes")

    checks = config["checks"]
    if isinstance(checks, str):
        checks = [checks]
    if not isinstance(checks, list) or not all(isinstance(c, str) and c for c in checks):
        raise ConfigError("Expected a list of check ids or prefixes", field="checks")

    sweeps = config["sweeps"]
    if not isinstance(sweeps, dict):
        raise ConfigError("Expected an object", field="sweeps")
    for name, values in sweeps.items():
        if not isinstance(values, list) or not values:
            raise ConfigError("Expected a non-empty list", field=f"sweeps.{name}")
        for i, value in enumerate(values):
            try:
                parse_exponent(value)
            except ValueError as e:
                raise ConfigError(str(e), field=f"sweeps.{name}[{i}]")

    for key in ("registry", "output"):
        if config[key] is not None and not isinstance(config[key], str):
            raise ConfigError("Expected a path string", field=key)
    for key in ("seed", "perturbations"):
        if not isinstance(config[key], int) or isinstance(config[key], bool) or config[key] < 0:
            raise ConfigError("Expected a non-negative integer", field=key)
    if not isinstance(config["expensive"], bool):
        raise ConfigError("Expected true or false", field="expensive")


class SuiteConfig:
    """
    Configuration of a suite run
    """
    def __init__(self, config_file: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None):
        """
        Initialize the configuration

        Args:
            config_file: Path to a JSON configuration file; defaults only when None
            overrides: Keys applied on top of the file, validated like the file

        Raises:
            ConfigError: The file is missing, is not valid JSON or fails validation
        """
        self.config_file = Path(config_file) if config_file else None
        self.default_config = DEFAULT_CONFIG
        self.config = self._load_config(overrides or {})

    def _load_config(self, overrides: Dict[str, Any]) -> Dict[str, Any]:
        """
        Load configuration from file and merge missing keys from the defaults

        Returns:
            Configuration dictionary
        """
        loaded: Dict[str, Any] = {}
        if self.config_file is not None:
            if not self.config_file.exists():
                raise ConfigError(f"Config file not found: {self.config_file}")
            try:
                with open(self.config_file, 'r') as f:
                    loaded = json.load(f)
            except json.JSONDecodeError as e:
                logger.error(f"Error loading config: {e.msg}")
                raise ConfigError(f"Invalid JSON: {e.msg}", line=e.lineno, column=e.colno)
            if not isinstance(loaded, dict):
                raise ConfigError("Top level must be a JSON object")
        config = _merge_defaults(overrides, _merge_defaults(loaded, self.default_config))
        if isinstance(config["checks"], str):
            config["checks"] = [config["checks"]]
        validate_config(config)
        return config

    def save_config(self, path: Optional[str] = None) -> None:
        """
        Save current configuration to file

        Args:
            path: Target file, defaults to the file the configuration came from
        """
        target = Path(path) if path else self.config_file
        if target is None:
            raise ValueError("No file to save the configuration to")
        with open(target, 'w') as f:
            json.dump(self.config, f, indent=2)
        logger.info(f"Configuration saved to {target}")

    def get_config(self) -> Dict[str, Any]:
        """
        Get the current configuration

        Returns:
            Configuration dictionary
        """
        return self.config

    def get_lambdas(self) -> List[float]:
        return [float(lam) for lam in self.config["lambdas"]]

    def get_sweep(self, name: str) -> List[float]:
        """
        Get a named sweep with "inf" entries turned into floats

        Args:
            name: Sweep name

        Returns:
            List of sweep values
        """
        values = self.config["sweeps"].get(name, DEFAULT_CONFIG["sweeps"].get(name))
        if values is None:
            raise ConfigError(f"Unknown sweep '{name}'", field=f"sweeps.{name}")
        return [parse_exponent(v) for v in values]

    def get_grid(self) -> Dict[str, Any]:
        return dict(self.config["grid"])

    def t_max(self, lam: float) -> float:
        grid = self.config["grid"]
        return float(grid["t_max_base"] + grid["t_max_per_lambda"] * lam)

    def get_checks(self) -> List[str]:
        return list(self.config["checks"])

    def band_tolerance(self) -> float:
        return float(self.config["tolerances"]["band"])

    def quadrature_tolerance(self) -> float:
        return float(self.config["tolerances"]["quadrature"])

    def get_registry(self) -> str:
        """
        Get the registry path: config value, then environment, then the default

        Returns:
            Path of the SQLite registry
        """
        return self.config.get("registry") or os.getenv(REGISTRY_ENV) or DEFAULT_REGISTRY

    def uses_default_registry(self) -> bool:
        """True when neither the configuration nor the environment names a registry"""
        return not (self.config.get("registry") or os.getenv(REGISTRY_ENV))

    def get_output(self) -> Path:
        return Path(self.config["output"])

    def get_seed(self) -> int:
        return int(self.config["seed"])

    def get_perturbations(self) -> int:
        return int(self.config["perturbations"])

    def is_expensive(self) -> bool:
        return bool(self.config["expensive"])

    def get_workers(self) -> int:
        """
        Get the worker count from the environment, defaulting to the CPU count

        Raises:
            ConfigError: The variable is not a positive integer
        """
        value = os.getenv(WORKERS_ENV)
        if not value:
            return os.cpu_count() or 1
        try:
            workers = int(value)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got '{value}'")
        if workers < 1:
            raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got '{value}'")
        return workers
