"""Classical trajectories for the preset scenarios.

The classical Hamiltonian mirrors the quantum one with -i d replaced by p:

    H = p^2/2 [+ x^2/2] + strength * theta(t) * s(x, p),   s = x or p.

Position-type perturbations therefore push with force -strength*theta and
momentum-type perturbations add strength*theta to the velocity (a kick
when theta switches on instantly).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoClosedFormError
from .scenarios import Scenario


@dataclass(frozen=True)
class Trajectory:
    """Samples ``(t, x, v)`` at uniform spacing; ``v`` is dx/dt."""

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.x.tolist(), self.v.tolist()))

    def position_at(self, t: float) -> float:
        i = int(np.argmin(np.abs(self.t - t)))
        if not math.isclose(self.t[i], t, abs_tol=1e-9):
            raise ValueError(f"t={t} is not on the trajectory grid")
        return float(self.x[i])


def _hamilton_rhs(scenario: Scenario):
    lam = scenario.strength
    prof = scenario.profile
    osc = 1.0 if scenario.oscillator else 0.0
    kick = scenario.perturbation_kind == "momentum"

    def rhs(t, y):
        x, p = y
        f = lam * prof(t)
        if kick:
            return np.array([p + f, -osc * x])
        return np.array([p, -osc * x - f])

    return rhs


def _velocity(scenario, t, x, p):
    if scenario.perturbation_kind == "momentum":
        return p + scenario.envelope(t)
    return p


def classical_trajectory(scenario: Scenario, x0: float, v0: float, t_final: float,
                         dt: float) -> Trajectory:
    """Classical RK4 trajectory from ``x0`` with pre-switch velocity ``v0``.

    The last step is shortened if ``dt`` does not divide ``t_final``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    rhs = _hamilton_rhs(scenario)
    n = int(math.ceil(t_final / dt - 1e-9))
    times = np.minimum(np.arange(n + 1) * dt, t_final)
    y = np.array([x0, v0], dtype=float)
    xs = np.empty(n + 1)
    vs = np.empty(n + 1)
    xs[0], vs[0] = x0, _velocity(scenario, 0.0, x0, v0)
    for i in range(n):
        t, h = times[i], times[i + 1] - times[i]
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        xs[i + 1] = y[0]
        vs[i + 1] = _velocity(scenario, times[i + 1], y[0], y[1])
    return Trajectory(times, xs, vs)


def closed_form_position(scenario: Scenario, t: float, x0: float = 0.0, v0: float = 0.0) -> float:
    """Analytic x(t) for heaviside and ramp switching."""
    kind = scenario.profile.kind
    if kind == "table":
        raise NoClosedFormError("table profiles have no closed-form trajectory")
    lam = scenario.strength
    r = scenario.profile.rate
    if t <= 0:
        return x0 + v0 * t
    c, s = math.cos(t), math.sin(t)
    name = scenario.name
    if name == "free-kick":
        drift = lam * t if kind == "heaviside" else lam * r * t * t / 2
        return x0 + v0 * t + drift
    if name == "constant-field":
        pull = lam * t * t / 2 if kind == "heaviside" else lam * r * t ** 3 / 6
        return x0 + v0 * t - pull
    if name == "driven-oscillator":
        forced = -lam * (1 - c) if kind == "heaviside" else -lam * r * (t - s)
        return x0 * c + v0 * s + forced
    # kicked oscillator: x'' = -x + strength * theta'(t)
    forced = lam * s if kind == "heaviside" else lam * r * (1 - c)
    return x0 * c + v0 * s + forced
