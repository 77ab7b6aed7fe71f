"""Split-step Fourier reference integrator on a periodic grid.

Integrates the full equation  i phi_t = (H0 + strength*theta(t)*s) phi
with Strang splitting: half a step of everything diagonal in x, a full
step of everything diagonal in k, and another half step in x.  The same
machinery applies e^{-itH0} to carry exact interaction-picture states into
the Schroedinger picture.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
import scipy.fft

from .errors import ConfigurationError, SupportOutOfDomainError
from .exact_solver import ExactSolution, evaluate_psi
from .scenarios import Scenario
from .special_functions import BumpFunction, kelly_eval

DEFAULT_N = 2048
DEFAULT_DT = 1e-3
MIN_POINTS = 256


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("IPLAB_THREADS", "1")))
    except ValueError:
        return 1


def _fft(a):
    return scipy.fft.fft(a, workers=_workers())


def _ifft(a):
    return scipy.fft.ifft(a, workers=_workers())


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @cached_property
    def x(self) -> np.ndarray:
        return self.x_min + self.spacing * np.arange(self.n_points)

    @cached_property
    def k(self) -> np.ndarray:
        return 2.0 * np.pi * scipy.fft.fftfreq(self.n_points, d=self.spacing)

    @property
    def k_max(self) -> float:
        return math.pi / self.spacing


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid:
    if not x_min < x_max:
        raise ConfigurationError(f"grid bounds inverted: ({x_min}, {x_max})")
    if n_points < MIN_POINTS or n_points & (n_points - 1):
        raise ConfigurationError(f"n_points must be a power of two >= {MIN_POINTS}, got {n_points}")
    return Grid(float(x_min), float(x_max), int(n_points))


def auto_grid(scenario: Scenario, t_final: float, n_points: int = DEFAULT_N,
              margin_widths: float = 4.0, solution: ExactSolution | None = None) -> Grid:
    """Domain covering the transported support plus a margin.

    The interval swept by ``(alpha + X(t), beta + X(t))`` for t in
    ``[0, t_final]`` is padded by ``margin_widths`` support widths on each
    side and then widened, about its centre, to the balanced length
    ``sqrt(2 pi n)`` at which the grid resolves the same extent in x as in
    k.  The packet's momentum tail is as long as its position tail, so the
    balanced box is the best single choice for Schroedinger-picture runs.
    """
    if solution is None:
        from .exact_solver import solve
        solution = solve(scenario.effective, scenario.bump)
    bump = scenario.bump
    ts = np.linspace(0.0, t_final, 257)
    xs = [solution.displacement(t) for t in ts]
    lo = bump.alpha + min(xs) - margin_widths * bump.width
    hi = bump.beta + max(xs) + margin_widths * bump.width
    half = max(0.5 * (hi - lo), 0.5 * math.sqrt(2.0 * math.pi * n_points))
    mid = 0.5 * (lo + hi)
    return make_grid(mid - half, mid + half, n_points)


@dataclass(frozen=True)
class WaveField:
    grid: Grid
    values: np.ndarray
    time: float = 0.0

    def with_values(self, values, time=None) -> "WaveField":
        return replace(self, values=values, time=self.time if time is None else time)


def initialize(grid: Grid, bump: BumpFunction) -> WaveField:
    """Sample ``bump`` and rescale to unit discrete norm."""
    if not (grid.x_min < bump.alpha and bump.beta < grid.x_max):
        raise SupportOutOfDomainError(
            f"support ({bump.alpha}, {bump.beta}) not inside ({grid.x_min}, {grid.x_max})"
        )
    vals = kelly_eval(bump, grid.x).astype(complex)
    vals /= math.sqrt(np.sum(np.abs(vals) ** 2) * grid.spacing)
    return WaveField(grid, vals, 0.0)


def sample_exact(grid: Grid, sol: ExactSolution, t: float) -> WaveField:
    """Exact interaction-picture state at ``t`` sampled on ``grid``."""
    return WaveField(grid, np.asarray(evaluate_psi(sol, t, grid.x), dtype=complex), t)


class SplitStepper:
    """Strang stepper for one scenario on one grid.

    The exponential factors are cached per (theta value, step size), so
    constant stretches of the switching profile cost two FFTs per step.
    """

    def __init__(self, scenario: Scenario, grid: Grid, include_perturbation: bool = True):
        self.scenario = scenario
        self.grid = grid
        self.include_perturbation = include_perturbation
        x, k = grid.x, grid.k
        self._v0 = 0.5 * x * x if scenario.oscillator else np.zeros_like(x)
        self._t0 = 0.5 * k * k
        self._cache_key = None
        self._factors = None

    def _strength(self, t_mid: float) -> float:
        return self.scenario.envelope(t_mid) if self.include_perturbation else 0.0

    def factors(self, t_mid: float, dt: float):
        f = self._strength(t_mid)
        key = (f, dt)
        if key != self._cache_key:
            pos = self.scenario.perturbation_kind == "position"
            v = self._v0 + f * self.grid.x if pos else self._v0
            kin = self._t0 if pos else self._t0 + f * self.grid.k
            self._factors = (np.exp(-0.5j * dt * v), np.exp(-1j * dt * kin))
            self._cache_key = key
        return self._factors

    def advance(self, values: np.ndarray, t: float, dt: float) -> np.ndarray:
        half_v, full_k = self.factors(t + 0.5 * dt, dt)
        return half_v * _ifft(full_k * _fft(half_v * values))

    def step(self, field: WaveField, dt: float) -> WaveField:
        return field.with_values(self.advance(field.values, field.time, dt), field.time + dt)

    def run(self, field: WaveField, duration: float, dt: float) -> WaveField:
        """Advance by ``duration`` using equal steps no longer than ``|dt|``."""
        if duration == 0:
            return field
        n = max(1, int(math.ceil(abs(duration) / abs(dt) - 1e-9)))
        h = duration / n
        vals, t = field.values, field.time
        for i in range(n):
            vals = self.advance(vals, t, h)
            t = field.time + (i + 1) * h
        return field.with_values(vals, field.time + duration)


def step(field: WaveField, scenario: Scenario, dt: float) -> WaveField:
    """One Strang step of the full equation; theta is taken at the step midpoint."""
    return SplitStepper(scenario, field.grid).step(field, dt)


def evolve(scenario: Scenario, grid: Grid, t_final: float, dt: float = DEFAULT_DT,
           snapshot_every: int = 1) -> list:
    """Integrate from the scenario's bump at t=0, snapshotting every few steps.

    If ``dt`` does not divide ``t_final`` the step is shrunk so the run
    ends exactly on ``t_final``.
    """
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if snapshot_every < 1:
        raise ValueError("snapshot_every must be a positive integer")
    n = int(round(t_final / dt))
    if n < 1 or abs(n * dt - t_final) > 1e-9 * max(1.0, t_final):
        n = int(math.ceil(t_final / dt))
    h = t_final / n
    stepper = SplitStepper(scenario, grid)
    field = initialize(grid, scenario.bump)
    snaps = [field]
    vals = field.values
    for i in range(n):
        vals = stepper.advance(vals, i * h, h)
        if (i + 1) % snapshot_every == 0 or i + 1 == n:
            snaps.append(WaveField(grid, vals, (i + 1) * h if i + 1 < n else t_final))
    return snaps


def evolve_to(scenario: Scenario, grid: Grid, times, dt: float = DEFAULT_DT) -> list:
    """Fields at each of ``times`` (ascending), landing on each exactly."""
    stepper = SplitStepper(scenario, grid)
    field = initialize(grid, scenario.bump)
    out = []
    for t in times:
        if t < field.time:
            raise ValueError("times must be ascending")
        field = stepper.run(field, t - field.time, dt)
        out.append(field)
    return out


def free_evolve(field: WaveField, h0_kind: str, t: float, dt: float = DEFAULT_DT) -> WaveField:
    """Apply ``exp(-i t H0)`` to ``field``.

    This is a change of picture at fixed physical time, so ``field.time``
    is carried over unchanged.  The free propagator is a single Fourier
    multiplier; the oscillator propagator is composed from split steps no
    longer than ``dt``.
    """
    grid = field.grid
    if t == 0:
        return field
    if h0_kind == "free":
        vals = _ifft(np.exp(-0.5j * t * grid.k ** 2) * _fft(field.values))
        return field.with_values(vals)
    if h0_kind != "oscillator":
        raise ValueError(f"unknown h0 kind {h0_kind!r}")
    n = max(1, int(math.ceil(abs(t) / dt - 1e-9)))
    h = t / n
    half_v = np.exp(-0.25j * h * grid.x ** 2)
    full_k = np.exp(-0.5j * h * grid.k ** 2)
    vals = field.values
    for _ in range(n):
        vals = half_v * _ifft(full_k * _fft(half_v * vals))
    return field.with_values(vals)


def schrodinger_exact(grid: Grid, scenario: Scenario, sol: ExactSolution, t: float,
                      dt: float = DEFAULT_DT) -> WaveField:
    """``exp(-itH0)`` applied to the sampled exact interaction-picture state."""
    return free_evolve(sample_exact(grid, sol, t), scenario.h0_kind, t, dt)
