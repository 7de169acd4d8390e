"""Experiment runner: named, reproducible experiments over the library."""

from .acceptance import CRITERIA, CriterionResult, run_all, run_criterion
from .config import (EXPERIMENTS, ConfigError, ExperimentConfig,
                     load_config_file, resolve_config)
from .experiments import RunResult, run_experiment, worker_cap
from .main import main

__all__ = [
    "CRITERIA",
    "ConfigError",
    "CriterionResult",
    "EXPERIMENTS",
    "ExperimentConfig",
    "RunResult",
    "load_config_file",
    "main",
    "resolve_config",
    "run_all",
    "run_criterion",
    "run_experiment",
    "worker_cap",
]
