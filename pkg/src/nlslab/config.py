"""Run configuration: a flat ``key = value`` file format, environment
overrides, and per-experiment validation.

File grammar, one assignment per line:

    # comment (blank lines allowed)
    experiment = simulate
    dim = 2
    n = 64
    N_list = 2, 4, 8, 16

Values are parsed by the declared type of the key: int, float, bool
(true/false), string, or a comma-separated list of floats. Unknown and
duplicate keys are errors. Environment variables named NLSLAB_<KEY> override
file values; command-line flags override both.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

EXPERIMENTS = (
    "simulate",
    "verify-i",
    "strichartz",
    "bilinear",
    "lwp",
    "smoothing",
    "almost-conservation",
    "bands",
    "scatter",
    "partition",
)

DATA_KINDS = ("zero", "gaussian", "annulus", "sobolev_decay", "plane_wave")

ENV_PREFIX = "NLSLAB_"


class ConfigError(ValueError):
    """Invalid, unknown, missing, or out-of-range configuration value."""


@dataclass
class RunConfig:
    experiment: str = ""
    # grid
    dim: int = 2
    n: int = 64
    box_length: float = 2.0 * math.pi
    # solver
    dt: float = 1e-3
    t_end: float = 0.5
    snapshot_stride: int = 10
    nonlinearity_on: bool = True
    # spectral parameters
    s: float = 0.76
    N: float = 8.0
    N_list: list[float] = field(default_factory=list)
    M_list: list[float] = field(default_factory=list)
    c: float = 0.5
    epsilon: float = 0.1
    # data
    data: str = "gaussian"
    amplitude: float = 0.25
    width: float = 0.8
    annulus_lo: float = 2.0
    annulus_hi: float = 4.0
    data_s: float = 0.76
    margin: float = 0.01
    mode_k: list[float] = field(default_factory=list)
    seed: int = 0
    # experiment knobs
    trials: int = 10
    n_times: int = 65
    tail_start: float = 0.25
    little_per_big: int = 4
    # output
    out: str = "out"
    format: str = "both"
    workers: int = 0  # 0 means all available cores

    def validate(self) -> None:
        def fail(msg: str) -> None:
            raise ConfigError(msg)

        if self.experiment not in EXPERIMENTS:
            fail(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if self.dim not in (1, 2, 3):
            fail(f"dim violates dim in {{1, 2, 3}}: got {self.dim}")
        if self.n < 8 or (self.n & (self.n - 1)) != 0:
            fail(f"n violates 'power of two >= 8': got {self.n}")
        if not self.box_length > 0:
            fail(f"box_length violates box_length > 0: got {self.box_length}")
        if not self.dt > 0:
            fail(f"dt violates dt > 0: got {self.dt}")
        if self.t_end < self.dt:
            fail(f"t_end violates t_end >= dt: got {self.t_end}")
        if self.snapshot_stride < 1:
            fail(f"snapshot_stride violates stride >= 1: got {self.snapshot_stride}")
        if not (0.5 < self.s < 1.0):
            fail(f"s violates s in (1/2, 1): got {self.s}")
        if not self.N > 0:
            fail(f"N violates N > 0: got {self.N}")
        if not self.c > 0:
            fail(f"c violates c > 0: got {self.c}")
        if not self.epsilon > 0:
            fail(f"epsilon violates epsilon > 0: got {self.epsilon}")
        if self.data not in DATA_KINDS:
            fail(f"data must be one of {DATA_KINDS}, got {self.data!r}")
        if self.data == "annulus" and not (0 < self.annulus_lo < self.annulus_hi):
            fail(f"annulus bounds violate 0 < lo < hi: got ({self.annulus_lo}, {self.annulus_hi})")
        if self.amplitude < 0:
            fail(f"amplitude violates amplitude >= 0: got {self.amplitude}")
        if self.format not in ("csv", "json", "both"):
            fail(f"format must be csv, json or both, got {self.format!r}")
        if self.workers < 0:
            fail(f"workers violates workers >= 0: got {self.workers}")
        if self.experiment in ("verify-i", "smoothing", "almost-conservation") and len(self.N_list) < 3:
            fail(f"{self.experiment} needs N_list with >= 3 dyadic values")
        if self.experiment in ("bilinear", "bands") and len(self.M_list) < 1:
            fail(f"{self.experiment} needs a nonempty M_list")
        if self.experiment == "scatter" and not (0 <= self.tail_start < self.t_end):
            fail(f"tail_start violates 0 <= tail_start < t_end: got {self.tail_start}")
        if self.experiment == "partition" and self.little_per_big < 1:
            fail(f"little_per_big violates little_per_big >= 1: got {self.little_per_big}")
        if self.trials < 1:
            fail(f"trials violates trials >= 1: got {self.trials}")
        if self.n_times < 2:
            fail(f"n_times violates n_times >= 2: got {self.n_times}")

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        return out


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_LIST_KEYS = {"N_list", "M_list", "mode_k"}
_INT_KEYS = {"dim", "n", "snapshot_stride", "seed", "trials", "n_times", "little_per_big", "workers"}
_FLOAT_KEYS = {"box_length", "dt", "t_end", "s", "N", "c", "epsilon", "amplitude", "width",
               "annulus_lo", "annulus_hi", "data_s", "margin", "tail_start"}
_BOOL_KEYS = {"nonlinearity_on"}
_STR_KEYS = {"experiment", "data", "out", "format"}


def coerce_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _LIST_KEYS:
            if not raw:
                return []
            return [float(tok) for tok in raw.split(",") if tok.strip()]
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            if raw.lower() in ("true", "1", "yes", "on"):
                return True
            if raw.lower() in ("false", "0", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if key in _STR_KEYS:
            return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {exc}") from None
    raise ConfigError(f"unknown key {key!r}")


def parse_config_text(text: str) -> dict:
    """Parse the key=value grammar; unknown and duplicate keys are errors."""
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = coerce_value(key, raw)
    return values


def env_overrides(environ=None) -> dict:
    env = os.environ if environ is None else environ
    values = {}
    for key in _FIELD_TYPES:
        name = ENV_PREFIX + key.upper()
        if name in env:
            values[key] = coerce_value(key, env[name])
    return values


def parse_config(
    path: Optional[str] = None,
    overrides: Optional[dict] = None,
    environ=None,
) -> RunConfig:
    """Layer file values, then NLSLAB_* environment variables, then explicit
    overrides (flags); validate the result."""
    values: dict = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {path}")
        values.update(parse_config_text(p.read_text()))
    values.update(env_overrides(environ))
    if overrides:
        for key, val in overrides.items():
            if key not in _FIELD_TYPES:
                raise ConfigError(f"unknown key {key!r}")
            values[key] = coerce_value(key, val) if isinstance(val, str) else val
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg
