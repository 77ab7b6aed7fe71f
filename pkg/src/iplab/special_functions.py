"""Switching profiles and the Kelly bump function.

The Kelly function on ``(alpha, beta)`` is

    K(x) = c * exp(-1 / ((x - alpha) * (beta - x)))    for alpha < x < beta

and exactly zero elsewhere.  It is C-infinity with compact support, which
makes it the initial packet for every scenario in this package.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from . import quadrature
from .errors import InvalidIntervalError, UnsupportedOrderError, ConfigurationError

DERIVATIVE_CAP = 8

WEIGHTS = ("1", "tau", "sin", "cos")


def heaviside(t):
    """Switching function: 0 for ``t < 0`` and 1 for ``t >= 0``."""
    if np.ndim(t):
        return np.where(np.asarray(t) >= 0.0, 1.0, 0.0)
    return 1.0 if t >= 0.0 else 0.0


# ---------------------------------------------------------------------------
# Switching profiles


@dataclass(frozen=True)
class SwitchingProfile:
    """Time dependence theta(t) of a perturbation.

    ``heaviside`` switches on instantly at t = 0, ``ramp`` grows as
    ``rate * t`` for t >= 0 and ``table`` interpolates linearly between
    ``samples`` (pairs ``(t, value)``), holding the end values flat outside
    the table and vanishing for t < 0.
    """

    kind: str = "heaviside"
    rate: float = 1.0
    samples: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in ("heaviside", "ramp", "table"):
            raise ConfigurationError(f"unknown profile kind {self.kind!r}")
        if self.kind == "table":
            samples = tuple((float(t), float(v)) for t, v in self.samples)
            if len(samples) < 2:
                raise ConfigurationError("table profile needs at least two samples")
            ts = [t for t, _ in samples]
            if any(b <= a for a, b in zip(ts[:-1], ts[1:])):
                raise ConfigurationError("table samples must be strictly increasing in t")
            object.__setattr__(self, "samples", samples)

    def __call__(self, t: float) -> float:
        if t < 0.0:
            return 0.0
        if self.kind == "heaviside":
            return 1.0
        if self.kind == "ramp":
            return self.rate * t
        pts = self.samples
        if t >= pts[-1][0]:
            return pts[-1][1]
        i = bisect.bisect_right(pts, (t, math.inf))
        if i == 0:
            return pts[0][1]
        (t0, v0), (t1, v1) = pts[i - 1], pts[i]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    @property
    def breakpoints(self) -> tuple:
        """Times where theta or its derivative jumps."""
        if self.kind == "table":
            return (0.0, *(t for t, _ in self.samples))
        return (0.0,)

    @property
    def has_closed_form(self) -> bool:
        return self.kind in ("heaviside", "ramp")


def _weight_fn(weight):
    return {"1": lambda s: 1.0, "tau": lambda s: s, "sin": math.sin, "cos": math.cos}[weight]


def profile_integral(profile: SwitchingProfile, weight: str, t: float, tol: float = 1e-12) -> float:
    """Integral of ``theta(tau) * w(tau)`` over ``[0, t]``.

    ``weight`` is one of ``"1"``, ``"tau"``, ``"sin"``, ``"cos"``.
    Heaviside and ramp profiles use closed forms; table profiles are
    integrated by adaptive Simpson between breakpoints.
    """
    if weight not in WEIGHTS:
        raise ValueError(f"weight must be one of {WEIGHTS}, got {weight!r}")
    if t < 0:
        raise ValueError("profile_integral needs t >= 0")
    if profile.kind == "heaviside":
        return {
            "1": t,
            "tau": 0.5 * t * t,
            "sin": 1.0 - math.cos(t),
            "cos": math.sin(t),
        }[weight]
    if profile.kind == "ramp":
        r = profile.rate
        return r * {
            "1": 0.5 * t * t,
            "tau": t ** 3 / 3.0,
            "sin": math.sin(t) - t * math.cos(t),
            "cos": math.cos(t) + t * math.sin(t) - 1.0,
        }[weight]
    w = _weight_fn(weight)
    return quadrature.integrate(lambda s: profile(s) * w(s), 0.0, t, profile.breakpoints, tol)


# ---------------------------------------------------------------------------
# Kelly bump


@dataclass(frozen=True)
class BumpFunction:
    alpha: float
    beta: float
    norm_const: float = 1.0

    def __post_init__(self):
        if not self.alpha < self.beta:
            raise InvalidIntervalError(f"need alpha < beta, got ({self.alpha}, {self.beta})")

    @property
    def center(self) -> float:
        return 0.5 * (self.alpha + self.beta)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.beta - self.alpha)

    @property
    def width(self) -> float:
        return self.beta - self.alpha

    def __call__(self, x):
        return kelly_eval(self, x)


def kelly_eval(bump: BumpFunction, x):
    """Evaluate the bump; exact zero on and outside the support endpoints."""
    x_arr = np.asarray(x, dtype=float)
    out = np.zeros_like(x_arr)
    inside = (x_arr > bump.alpha) & (x_arr < bump.beta)
    xi = x_arr[inside]
    out[inside] = bump.norm_const * np.exp(-1.0 / ((xi - bump.alpha) * (bump.beta - xi)))
    return out if x_arr.ndim else float(out)


_PREFACTOR_CACHE: dict = {}


def _prefactor_numerators(half_width: float, order: int) -> list:
    """Numerators p_n of K^(n) = p_n(y) / q(y)^(2n) * K, with y = x - center.

    q(y) = s^2 - y^2 is the support polynomial.  Differentiating
    R_n = p_n / q^(2n) and adding R_n * g' (g = -1/q, g' = q'/q^2) gives

        p_{n+1} = p_n' q^2 - 2n q q' p_n + q' p_n.
    """
    key = (half_width, order)
    if key in _PREFACTOR_CACHE:
        return _PREFACTOR_CACHE[key]
    q = Polynomial([half_width ** 2, 0.0, -1.0])
    dq = q.deriv()
    polys = [Polynomial([1.0])]
    for n in range(order):
        p = polys[-1]
        polys.append(p.deriv() * q * q - 2 * n * q * dq * p + dq * p)
    _PREFACTOR_CACHE[key] = polys
    return polys


def kelly_derivative(bump: BumpFunction, order: int, x, cap: int = DERIVATIVE_CAP):
    """``order``-th derivative of the bump at ``x``.

    The prefactor is evaluated in log space, ``p_n(y) * exp(g - 2n log q)``,
    so nothing overflows as ``x`` approaches the support edge where the
    rational part blows up and the exponential vanishes.
    """
    if order < 0 or order > cap:
        raise UnsupportedOrderError(f"derivative order {order} outside [0, {cap}]")
    if order == 0:
        return kelly_eval(bump, x)
    x_arr = np.asarray(x, dtype=float)
    out = np.zeros_like(x_arr)
    inside = (x_arr > bump.alpha) & (x_arr < bump.beta)
    y = x_arr[inside] - bump.center
    s = bump.half_width
    qv = (s - y) * (s + y)
    p = _prefactor_numerators(s, order)[order]
    out[inside] = bump.norm_const * p(y) * np.exp(-1.0 / qv - 2 * order * np.log(qv))
    return out if x_arr.ndim else float(out)


def kelly_normalize(alpha: float, beta: float) -> BumpFunction:
    """Bump on ``(alpha, beta)`` scaled to unit L2 norm."""
    if not alpha < beta:
        raise InvalidIntervalError(f"need alpha < beta, got ({alpha}, {beta})")
    raw = BumpFunction(alpha, beta, 1.0)
    # substitute x = center + s*u so the integrand lives on (-1, 1)
    s = raw.half_width
    mass = s * quadrature.integrate(
        lambda u: math.exp(-2.0 / (s * s * (1.0 - u) * (1.0 + u))) if -1.0 < u < 1.0 else 0.0,
        -1.0, 1.0, breakpoints=(0.0,), tol=1e-15,
    )
    return BumpFunction(alpha, beta, 1.0 / math.sqrt(mass))


def table_profile(samples: Sequence) -> SwitchingProfile:
    return SwitchingProfile(kind="table", samples=tuple(samples))
