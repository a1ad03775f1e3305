"""Experiment harness: config files and the runs they describe."""

from .bench import bench_complexity, time_per_solution
from .config import ConfigError, ExperimentConfig, load_config
from .runner import run_experiment, run_trial, sweep_alpha

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "bench_complexity",
    "load_config",
    "run_experiment",
    "run_trial",
    "sweep_alpha",
    "time_per_solution",
]
