"""Experiment configuration: ``key = value`` files plus CLI overrides."""

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..domains import make_domain
from ..es import ALGORITHMS


class ConfigError(ValueError):
    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    domain: str
    algorithm: str
    psi: int = 5
    batch_size: int = 40
    iterations: int = 10000
    sigma0: float = 0.02
    alpha: float = 0.001
    min_f: float = 0.0
    grid_dims: tuple = (100, 100)
    seeds: list = field(default_factory=lambda: [0])
    output_dir: Path = Path("results")
    k: Optional[int] = None
    learning_rate: float = 0.01
    l2_coeff: float = 0.005
    checkpoint_every: int = 0

    @property
    def evaluations(self):
        return self.iterations * self.psi * self.batch_size

    def es_options(self):
        return {"k": self.k if self.k is not None else self.batch_size,
                "learning_rate": self.learning_rate,
                "l2_coeff": self.l2_coeff}

    def validate(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(
                "algorithm", f"unknown algorithm '{self.algorithm}' "
                f"(choose from {', '.join(ALGORITHMS)})")
        try:
            make_domain(self.domain)
        except ValueError as exc:
            raise ConfigError("domain", str(exc)) from None
        for name in ("psi", "batch_size", "iterations"):
            if getattr(self, name) < (2 if name == "batch_size" else 0):
                raise ConfigError(name, "out of range")
        if self.psi < 1:
            raise ConfigError("psi", "need at least one emitter")
        if not self.sigma0 > 0:
            raise ConfigError("sigma0", "must be positive")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError("alpha", "must lie in [0, 1]")
        if not self.grid_dims or any(d < 1 for d in self.grid_dims):
            raise ConfigError("grid_dims", "every dimension needs >= 1 cell")
        if len(self.grid_dims) != 2:
            raise ConfigError("grid_dims", "benchmark domains have 2 measures")
        if not self.seeds:
            raise ConfigError("seeds", "at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds", "seeds must be distinct")
        if self.k is not None and self.k < 1:
            raise ConfigError("k", "must be positive")
        if self.checkpoint_every < 0:
            raise ConfigError("checkpoint_every", "must be non-negative")
        return self

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def _parse_seeds(text):
    seeds = []
    for part in text.replace(" ", ",").split(","):
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def _parse_dims(text):
    return tuple(int(p) for p in text.replace("x", ",").replace(" ", ",")
                 .split(",") if p)


def _optional_int(text):
    return None if text.lower() in ("", "none") else int(text)


# config key -> (dataclass field, parser)
KEYS = {
    "domain": ("domain", str),
    "algorithm": ("algorithm", str),
    "psi": ("psi", int),
    "lambda": ("batch_size", int),
    "batch_size": ("batch_size", int),
    "iterations": ("iterations", int),
    "sigma0": ("sigma0", float),
    "sigma": ("sigma0", float),
    "alpha": ("alpha", float),
    "min_f": ("min_f", float),
    "grid_dims": ("grid_dims", _parse_dims),
    "seeds": ("seeds", _parse_seeds),
    "output_dir": ("output_dir", Path),
    "k": ("k", _optional_int),
    "learning_rate": ("learning_rate", float),
    "l2_coeff": ("l2_coeff", float),
    "checkpoint_every": ("checkpoint_every", int),
}


def parse_values(raw):
    """Turn a mapping of config keys to strings into dataclass kwargs."""
    values = {}
    for key, text in raw.items():
        key = key.strip().replace("-", "_")
        if key not in KEYS:
            raise ConfigError(key, "unknown configuration key")
        name, parser = KEYS[key]
        try:
            values[name] = parser(str(text).strip())
        except ValueError:
            raise ConfigError(key, f"cannot parse value '{text}'") from None
    return values


def read_config_file(path):
    raw = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}", "expected 'key = value'")
            key, value = line.split("=", 1)
            raw[key.strip()] = value.strip()
    return raw


def load_config(path=None, overrides=None):
    """Build a validated config; ``overrides`` win over the file."""
    raw = read_config_file(path) if path is not None else {}
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    values = parse_values(raw)
    for required in ("domain", "algorithm"):
        if required not in values:
            raise ConfigError(required, "missing required key")
    return ExperimentConfig(**values).validate()
