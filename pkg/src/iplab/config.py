"""Scenario configuration files.

Flat ``key = value`` text, one key per line, ``#`` starts a comment.
Every key except ``scenario`` has a default::

    scenario = driven-oscillator
    lambda = 1.0
    theta = heaviside          # heaviside | ramp | table
    theta_rate = 1.0           # ramp only
    theta_table = 0:0, 1:1, 2:1   # table only, t:value pairs
    alpha = -1
    beta = 1
    grid = auto                # or: x_min, x_max, n_points
    n_points = 2048            # used by grid = auto
    dt = 0.001
    t_final = 2
    snapshot_every = 500
    output_dir = out
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError
from .scenarios import PRESETS, Scenario
from .special_functions import SwitchingProfile, kelly_normalize


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    strength: float = 1.0
    theta: SwitchingProfile = field(default_factory=SwitchingProfile)
    alpha: float = -1.0
    beta: float = 1.0
    grid: tuple | None = None  # (x_min, x_max, n_points); None means auto
    n_points: int = 2048
    dt: float = 1e-3
    t_final: float = 2.0
    snapshot_every: int = 500
    output_dir: Path = Path("out")

    def __post_init__(self):
        if self.scenario not in PRESETS:
            raise ConfigurationError(f"unknown scenario {self.scenario!r}")
        if not self.alpha < self.beta:
            raise ConfigurationError(f"need alpha < beta, got alpha={self.alpha}, beta={self.beta}")
        if not (self.dt > 0 and self.t_final > 0):
            raise ConfigurationError("dt and t_final must be positive")
        if not math.isfinite(self.strength):
            raise ConfigurationError("lambda must be finite")
        if self.snapshot_every < 1:
            raise ConfigurationError("snapshot_every must be a positive integer")

    def build_scenario(self) -> Scenario:
        return Scenario(self.scenario, self.strength, self.theta,
                        kelly_normalize(self.alpha, self.beta))


_KEYS = {"scenario", "lambda", "theta", "theta_rate", "theta_table", "alpha", "beta",
         "grid", "n_points", "dt", "t_final", "snapshot_every", "output_dir"}


def _number(key, raw, kind=float):
    try:
        if kind is int:
            value = float(raw)
            if not value.is_integer():
                raise ValueError
            return int(value)
        return kind(raw)
    except ValueError:
        raise ConfigurationError(f"{key}: expected {kind.__name__}, got {raw!r}") from None


def parse_config(text: str) -> ScenarioConfig:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    if "scenario" not in raw:
        raise ConfigurationError("missing required key 'scenario'")

    kind = raw.get("theta", "heaviside")
    if kind == "table":
        if "theta_table" not in raw:
            raise ConfigurationError("theta = table needs theta_table")
        pairs = []
        for item in raw["theta_table"].split(","):
            t, _, v = item.partition(":")
            pairs.append((_number("theta_table", t), _number("theta_table", v)))
        theta = SwitchingProfile("table", samples=tuple(pairs))
    else:
        theta = SwitchingProfile(kind, rate=_number("theta_rate", raw.get("theta_rate", "1.0")))

    grid = None
    if raw.get("grid", "auto") != "auto":
        parts = [p.strip() for p in raw["grid"].split(",")]
        if len(parts) != 3:
            raise ConfigurationError("grid must be 'auto' or 'x_min, x_max, n_points'")
        grid = (_number("grid", parts[0]), _number("grid", parts[1]), _number("grid", parts[2], int))

    return ScenarioConfig(
        scenario=raw["scenario"],
        strength=_number("lambda", raw.get("lambda", "1.0")),
        theta=theta,
        alpha=_number("alpha", raw.get("alpha", "-1")),
        beta=_number("beta", raw.get("beta", "1")),
        grid=grid,
        n_points=_number("n_points", raw.get("n_points", "2048"), int),
        dt=_number("dt", raw.get("dt", "1e-3")),
        t_final=_number("t_final", raw.get("t_final", "2")),
        snapshot_every=_number("snapshot_every", raw.get("snapshot_every", "500"), int),
        output_dir=Path(raw.get("output_dir", "out")),
    )


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
