"""INI experiment configuration with defaults and validation.

Every key is optional; unset keys fall back to the defaults below, and
command-line flags override both.  Sections and keys:

    [task]      name (case1|case2), units (>= 1)
    [data]      train_size, train_seed, train_mode (grid|random),
                test_size, test_seed, test_mode
    [schedule]  g (> 0), dtheta (in (0, 0.01])
    [trainer]   budget, tolerance, seed, restarts, rhobeg,
                method (cobyla|nelder-mead), initial (zeros|random)
    [evaluate]  predictor (ideal|adiabatic), stride (>= 0)
    [output]    figures (true|false)
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace

__all__ = ["ExperimentConfig", "load_config", "override"]


@dataclass(frozen=True)
class ExperimentConfig:
    task: str = "case1"
    units: int = 3
    train_size: int = 20
    train_seed: int = 11
    train_mode: str = "random"
    test_size: int = 100
    test_seed: int = 1
    test_mode: str = "grid"
    g: float = 20.0
    dtheta: float = 5e-4
    budget: int = 2000
    tolerance: float = 1e-6
    seed: int = 0
    restarts: int = 0
    rhobeg: float = 0.5
    method: str = "cobyla"
    initial: str = "zeros"
    predictor: str = "adiabatic"
    stride: int = 50
    figures: bool = True

    def __post_init__(self):
        if self.task not in ("case1", "case2"):
            raise ValueError(f"task.name must be case1 or case2, got {self.task!r}")
        if self.units < 1:
            raise ValueError(f"task.units must be at least 1, got {self.units}")
        for key in ("train_size", "test_size"):
            if getattr(self, key) < 1:
                raise ValueError(f"data.{key} must be at least 1, got {getattr(self, key)}")
        for key in ("train_mode", "test_mode"):
            if getattr(self, key) not in ("grid", "random"):
                raise ValueError(f"data.{key} must be grid or random")
        if not self.g > 0.0:
            raise ValueError(f"schedule.g must be positive, got {self.g}")
        if not 0.0 < self.dtheta <= 0.01:
            raise ValueError(f"schedule.dtheta must lie in (0, 0.01], got {self.dtheta}")
        if self.budget < 1:
            raise ValueError(f"trainer.budget must be at least 1, got {self.budget}")
        if not self.tolerance > 0.0:
            raise ValueError(f"trainer.tolerance must be positive, got {self.tolerance}")
        if self.restarts < 0:
            raise ValueError(f"trainer.restarts must be non-negative, got {self.restarts}")
        if not self.rhobeg > 0.0:
            raise ValueError(f"trainer.rhobeg must be positive, got {self.rhobeg}")
        if self.method not in ("cobyla", "nelder-mead"):
            raise ValueError(f"trainer.method must be cobyla or nelder-mead")
        if self.initial not in ("zeros", "random"):
            raise ValueError(f"trainer.initial must be zeros or random")
        if self.predictor not in ("ideal", "adiabatic"):
            raise ValueError(f"evaluate.predictor must be ideal or adiabatic")
        if self.stride < 0:
            raise ValueError(f"evaluate.stride must be non-negative, got {self.stride}")


_SCHEMA = {
    ("task", "name"): ("task", str),
    ("task", "units"): ("units", int),
    ("data", "train_size"): ("train_size", int),
    ("data", "train_seed"): ("train_seed", int),
    ("data", "train_mode"): ("train_mode", str),
    ("data", "test_size"): ("test_size", int),
    ("data", "test_seed"): ("test_seed", int),
    ("data", "test_mode"): ("test_mode", str),
    ("schedule", "g"): ("g", float),
    ("schedule", "dtheta"): ("dtheta", float),
    ("trainer", "budget"): ("budget", int),
    ("trainer", "tolerance"): ("tolerance", float),
    ("trainer", "seed"): ("seed", int),
    ("trainer", "restarts"): ("restarts", int),
    ("trainer", "rhobeg"): ("rhobeg", float),
    ("trainer", "method"): ("method", str),
    ("trainer", "initial"): ("initial", str),
    ("evaluate", "predictor"): ("predictor", str),
    ("evaluate", "stride"): ("stride", int),
    ("output", "figures"): ("figures", bool),
}


def load_config(path=None) -> ExperimentConfig:
    """Read an INI file into an ExperimentConfig; path=None gives defaults."""
    if path is None:
        return ExperimentConfig()
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ValueError(f"malformed config {path}: {exc}") from exc

    known = {}
    for section in parser.sections():
        for key in parser[section]:
            if (section, key) not in _SCHEMA:
                raise ValueError(f"unknown config key [{section}] {key}")
            field_name, kind = _SCHEMA[(section, key)]
            try:
                if kind is bool:
                    value = parser.getboolean(section, key)
                elif kind is int:
                    value = parser.getint(section, key)
                elif kind is float:
                    value = parser.getfloat(section, key)
                else:
                    value = parser.get(section, key).strip().lower()
            except ValueError as exc:
                raise ValueError(f"bad value for [{section}] {key}: {exc}") from exc
            known[field_name] = value
    return ExperimentConfig(**known)


def override(config: ExperimentConfig, **kwargs) -> ExperimentConfig:
    """Apply non-None keyword overrides, revalidating the result."""
    updates = {k: v for k, v in kwargs.items() if v is not None}
    return replace(config, **updates) if updates else config
