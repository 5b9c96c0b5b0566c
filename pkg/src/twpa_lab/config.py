"""Flat ``key = value`` experiment configs.

One assignment per line, ``#`` starts a comment. A value of the form
``start:stop:count`` marks the swept variable (at most one per file);
``spacing = log`` switches it to logarithmic spacing. Every other numeric
value is a fixed parameter. Example::

    mode = lumped-sweep
    r = 2.65
    eps_bar = 0:0.5:101
    delta = 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np


class ConfigError(Exception):
    """Config parse failure; carries the offending line number and key."""

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.key = key


class Mode(str, Enum):
    LUMPED_SWEEP = "lumped-sweep"
    DISTRIBUTED_SWEEP = "distributed-sweep"
    QUBIT_SWEEP = "qubit-sweep"
    VERIFY_ORACLE = "verify-oracle"
    PRESET = "preset"


PRESETS = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7")

# Allowed fixed/swept parameters per mode, with defaults.
MODE_PARAMS: dict[Mode, dict[str, float]] = {
    Mode.LUMPED_SWEEP: {"r": 2.65, "eps_bar": 0.05, "delta": 0.0},
    Mode.DISTRIBUTED_SWEEP: {"nu": 1.0, "v": 1.0, "length": 1.0, "kappa_bar": 0.2, "eps": 0.0, "delta_k": 0.0},
    Mode.QUBIT_SWEEP: {"r": 1.0, "eps_bar": 0.05, "delta": 0.0, "gamma": 1.0},
    Mode.VERIFY_ORACLE: {"count": 50, "seed": 20240101, "segments": 2**16, "tolerance": 1e-6},
    Mode.PRESET: {},
}


@dataclass(frozen=True)
class Sweep:
    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class ExperimentConfig:
    mode: Mode
    preset: str | None = None
    params: dict[str, float] = field(default_factory=dict)
    sweep: Sweep | None = None
    out: str | None = None


def _number(text: str, line: int, key: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}", line, key) from None


def parse_text(text: str) -> ExperimentConfig:
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", lineno)
        if not value:
            raise ConfigError("empty value", lineno, key)
        if key in raw:
            raise ConfigError(f"duplicate key (first set on line {raw[key][1]})", lineno, key)
        raw[key] = (value, lineno)

    if "mode" not in raw:
        raise ConfigError("missing required key", None, "mode")
    mode_text, mode_line = raw.pop("mode")
    try:
        mode = Mode(mode_text)
    except ValueError:
        choices = ", ".join(m.value for m in Mode)
        raise ConfigError(f"unknown mode {mode_text!r} (choose from {choices})", mode_line, "mode") from None

    preset = None
    if "preset" in raw:
        preset, line = raw.pop("preset")
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}", line, "preset")
    if mode is Mode.PRESET and preset is None:
        raise ConfigError("mode = preset requires a preset", None, "preset")

    out = raw.pop("out")[0] if "out" in raw else None
    spacing = "linear"
    spacing_line = None
    if "spacing" in raw:
        spacing, spacing_line = raw.pop("spacing")
        if spacing not in ("linear", "log"):
            raise ConfigError(f"spacing must be 'linear' or 'log', got {spacing!r}", spacing_line, "spacing")

    allowed = MODE_PARAMS[mode]
    params = dict(allowed)
    sweep = None
    for key, (value, line) in raw.items():
        if key not in allowed:
            raise ConfigError(f"unknown parameter for mode {mode.value}", line, key)
        if ":" in value:
            if mode in (Mode.VERIFY_ORACLE, Mode.PRESET):
                raise ConfigError("this mode does not sweep", line, key)
            if sweep is not None:
                raise ConfigError(f"only one swept variable allowed (already sweeping '{sweep.name}')", line, key)
            parts = value.split(":")
            if len(parts) != 3:
                raise ConfigError("sweep must be start:stop:count", line, key)
            start, stop = _number(parts[0], line, key), _number(parts[1], line, key)
            count = _number(parts[2], line, key)
            if count != int(count) or count < 2:
                raise ConfigError("sweep count must be an integer >= 2", line, key)
            if spacing == "log" and (start <= 0 or stop <= 0):
                raise ConfigError("log spacing needs positive bounds", line, key)
            sweep = Sweep(key, start, stop, int(count), spacing)
            params.pop(key)
        else:
            params[key] = _number(value, line, key)

    if mode in (Mode.LUMPED_SWEEP, Mode.DISTRIBUTED_SWEEP, Mode.QUBIT_SWEEP) and sweep is None:
        raise ConfigError(f"mode {mode.value} needs one swept variable (start:stop:count)")
    if spacing_line is not None and sweep is None:
        raise ConfigError("spacing given without a swept variable", spacing_line, "spacing")
    return ExperimentConfig(mode, preset, params, sweep, out)


def load(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_text(text)
