"""Config-driven experiment runner and CLI."""

from .config import ConfigError, Diagnostic, ExperimentConfig, load_config, parse_config, validate_config
from .runner import RunOutcome, run_experiment, strip_timings

__all__ = ["ConfigError", "Diagnostic", "ExperimentConfig", "RunOutcome", "load_config", "parse_config",
           "run_experiment", "strip_timings", "validate_config"]
