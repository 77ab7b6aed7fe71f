"""Differential operators with polynomial coefficients.

Operators are finite sums  sum c_{mn} x^m d^n  kept in normal order (all
powers of x to the left of all derivatives), so two operators are equal
exactly when their term maps are equal.  Coefficients may be any numbers
that support ``+``, ``*`` and ``== 0``: Python complex for physics,
``fractions.Fraction`` or Gaussian integers for exact identity checks.

On top of the algebra sit the adjoint powers ad^n_{H0}(A), detection of
when the series  sum (it)^n/n! ad^n A  terminates or closes on itself, and
its resummation into closed-form time functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
import scipy.linalg
import sympy as sp

from .errors import NoClosedFormError, NotFirstOrderError, OrderCapError
from .special_functions import SwitchingProfile

MAX_ORDER = 32

T = sp.Symbol("t", real=True)


def _falling(c: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= c - j
    return out


class DiffOperator:
    """Immutable sum of ``coeff * x**m * d**n`` terms.

    ``terms`` maps ``(m, n)`` to the coefficient; zero coefficients are
    dropped on construction.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for (m, n), c in (terms or {}).items():
            if m < 0 or n < 0:
                raise ValueError("powers must be nonnegative")
            if c != 0:
                clean[(int(m), int(n))] = c
        self._terms = dict(sorted(clean.items()))

    # constructors
    @classmethod
    def identity(cls, c=1):
        return cls({(0, 0): c})

    @classmethod
    def x(cls, c=1):
        return cls({(1, 0): c})

    @classmethod
    def d(cls, c=1):
        return cls({(0, 1): c})

    @classmethod
    def zero(cls):
        return cls()

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coeff(self, m: int, n: int):
        return self._terms.get((m, n), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def max_degree(self) -> tuple:
        """Largest x-power and largest derivative order present."""
        if not self._terms:
            return (0, 0)
        return (max(m for m, _ in self._terms), max(n for _, n in self._terms))

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "DiffOperator(0)"
        parts = []
        for (m, n), c in self._terms.items():
            mon = "*".join(p for p in (
                "x" if m == 1 else f"x^{m}" if m else "",
                "d" if n == 1 else f"d^{n}" if n else "",
            ) if p)
            parts.append(f"({c})" + (f"*{mon}" if mon else ""))
        return "DiffOperator(" + " + ".join(parts) + ")"

    def __add__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return DiffOperator(out)

    def __neg__(self):
        return DiffOperator({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self + (-other)

    def scale(self, s):
        return DiffOperator({k: s * c for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, DiffOperator):
            return self.compose(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """Operator product ``self @ other`` reduced to normal order.

        Uses the Leibniz rule  d^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) d^(b-k).
        """
        out: dict = {}
        for (a, b), c1 in self._terms.items():
            for (c, d), c2 in other._terms.items():
                for k in range(min(b, c) + 1):
                    w = math.comb(b, k) * _falling(c, k)
                    key = (a + c - k, b + d - k)
                    out[key] = out.get(key, 0) + w * (c1 * c2)
        return DiffOperator(out)

    __matmul__ = compose

    def map_coefficients(self, fn):
        return DiffOperator({k: fn(c) for k, c in self._terms.items()})

    def is_close(self, other: "DiffOperator", tol: float = 1e-12) -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(abs(self.coeff(*k) - other.coeff(*k)) <= tol for k in keys)


def free_hamiltonian() -> DiffOperator:
    """-(1/2) d^2"""
    return DiffOperator({(0, 2): -0.5})


def oscillator_hamiltonian() -> DiffOperator:
    """-(1/2) d^2 + (1/2) x^2"""
    return DiffOperator({(0, 2): -0.5, (2, 0): 0.5})


def momentum() -> DiffOperator:
    """-i d"""
    return DiffOperator({(0, 1): -1j})


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return a.compose(b) - b.compose(a)


def ad_power(h0: DiffOperator, a: DiffOperator, n: int, max_order: int = MAX_ORDER) -> DiffOperator:
    """n-fold nested commutator [h0, [h0, ... [h0, a]]]."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > max_order:
        raise OrderCapError(f"adjoint power {n} exceeds max order {max_order}")
    out = a
    for _ in range(n):
        if out.is_zero():
            break
        out = commutator(h0, out)
    return out


# ---------------------------------------------------------------------------
# Series closure


@dataclass(frozen=True)
class ScaledPerturbation:
    """``strength * theta(t) * spatial``."""

    spatial: DiffOperator
    strength: float
    profile: SwitchingProfile

    def __post_init__(self):
        mx, mn = self.spatial.max_degree()
        if mx > 1 or mn > 1:
            raise NotFirstOrderError("perturbation must be at most first order in x and d")

    def envelope(self, t: float) -> float:
        return self.strength * self.profile(t)


_BASIS = [(0, 0), (1, 0), (0, 1)]


def _as_vector(op: DiffOperator, keys) -> np.ndarray:
    return np.array([complex(op.coeff(*k)) for k in keys])


@dataclass(frozen=True)
class KrylovClosure:
    """Adjoint powers v_0..v_{k-1} with ad v_{k-1} = sum_j c_j v_j.

    Termination is the special case c = 0.
    """

    powers: tuple
    relation: tuple

    @property
    def dimension(self) -> int:
        return len(self.powers)

    @property
    def terminates(self) -> bool:
        return all(c == 0 for c in self.relation)

    def generator(self) -> np.ndarray:
        """Matrix of ad in the Krylov basis (companion form)."""
        k = self.dimension
        m = np.zeros((k, k), dtype=complex)
        for j in range(k - 1):
            m[j + 1, j] = 1.0
        m[:, k - 1] = self.relation
        return m


def find_closure(h0: DiffOperator, a: DiffOperator, max_order: int = MAX_ORDER,
                 tol: float = 1e-12) -> KrylovClosure:
    """Compute ad-powers until one vanishes or lies in the span of the previous ones."""
    powers = [a]
    for n in range(1, max_order + 1):
        nxt = commutator(h0, powers[-1])
        keys = sorted(set().union(*(p.terms for p in powers), nxt.terms))
        target = _as_vector(nxt, keys)
        if np.max(np.abs(target), initial=0.0) <= tol:
            return KrylovClosure(tuple(powers), tuple(0.0 for _ in powers))
        basis = np.column_stack([_as_vector(p, keys) for p in powers])
        coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
        if np.max(np.abs(basis @ coef - target)) <= tol * max(1.0, np.max(np.abs(target))):
            coef = [_clean(c, tol) for c in coef]
            return KrylovClosure(tuple(powers), tuple(coef))
        powers.append(nxt)
    raise NoClosedFormError(
        f"adjoint series neither terminated nor closed within {max_order} orders", powers
    )


def _clean(c: complex, tol: float):
    re = 0.0 if abs(c.real) <= tol else c.real
    im = 0.0 if abs(c.imag) <= tol else c.imag
    return complex(re, im)


# ---------------------------------------------------------------------------
# Time functions


@dataclass(frozen=True)
class TimeFunction:
    """Scalar coefficient function of t.

    ``kind`` is ``"constant"``, ``"polynomial"``, ``"trigonometric"``,
    ``"hyperbolic"`` or ``"series"``; all but ``"series"`` carry a sympy
    ``expr`` in the symbol ``T``.  ``"series"`` functions are evaluated
    numerically from the Krylov recurrence.
    """

    kind: str
    expr: Optional[sp.Expr]
    fn: Callable

    def __call__(self, t):
        return self.fn(t)

    @property
    def closed_form(self) -> bool:
        return self.expr is not None

    @classmethod
    def from_expr(cls, expr) -> "TimeFunction":
        expr = sp.nsimplify(sp.simplify(expr), rational=False) if expr.free_symbols else sp.sympify(expr)
        if not expr.free_symbols:
            kind = "constant"
        elif expr.is_polynomial(T):
            kind = "polynomial"
        elif expr.has(sp.sinh, sp.cosh, sp.exp):
            kind = "hyperbolic"
        else:
            kind = "trigonometric"
        f = sp.lambdify(T, expr, "math")
        return cls(kind, expr, lambda t, f=f: complex(f(t)))


def _tidy(expr):
    expr = sp.expand_complex(expr.rewrite(sp.cos))
    return sp.simplify(expr)


@lru_cache(maxsize=64)
def _symbolic_series(generator_key: tuple, dim: int):
    m = sp.Matrix(dim, dim, [sp.nsimplify(complex(c).real) + sp.I * sp.nsimplify(complex(c).imag)
                             for c in generator_key])
    col = (sp.I * T * m).exp()[:, 0]
    return tuple(_tidy(c) for c in col)


def _series_functions(closure: KrylovClosure):
    """Coefficient functions g_j(t) with  e^{it ad} a = sum_j g_j(t) v_j."""
    gen = closure.generator()
    dim = closure.dimension
    rational = all(
        abs(complex(sp.nsimplify(z.real)) - z.real) < 1e-14 and abs(complex(sp.nsimplify(z.imag)) - z.imag) < 1e-14
        for z in gen.ravel()
    )
    if closure.terminates or (dim <= 2 and rational):
        if closure.terminates:
            exprs = tuple((sp.I * T) ** j / sp.factorial(j) for j in range(dim))
        else:
            exprs = _symbolic_series(tuple(gen.ravel()), dim)
        return [("expr", e) for e in exprs]

    def column(t, gen=gen):
        return scipy.linalg.expm(1j * t * gen)[:, 0]

    return [("num", lambda t, j=j: complex(column(t)[j])) for j in range(dim)]


def _combine(parts, weights):
    """sum_j weights[j] * g_j as a TimeFunction."""
    if all(kind == "expr" for kind, _ in parts):
        expr = sum((sp.nsimplify(w.real) + sp.I * sp.nsimplify(w.imag)) * e
                   for (_, e), w in zip(parts, weights))
        return TimeFunction.from_expr(_tidy(sp.sympify(expr)))
    fns = [(f if kind == "num" else sp.lambdify(T, f, "cmath")) for kind, f in parts]

    def fn(t, fns=fns, weights=weights):
        return sum(w * complex(f(t)) for f, w in zip(fns, weights))

    return TimeFunction("series", None, fn)


# ---------------------------------------------------------------------------
# Effective Hamiltonian


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """First-order operator  A(t) x - i B(t) d + C(t).

    A = strength * theta(t) * series_x(t), and likewise for B, C.  The
    ``series_*`` functions are the resummed adjoint series of the spatial
    part alone.
    """

    series_x: TimeFunction
    series_d: TimeFunction
    series_1: TimeFunction
    strength: float
    profile: SwitchingProfile

    def envelope(self, t):
        return self.strength * self.profile(t)

    def coeff_x(self, t: float) -> float:
        return self.envelope(t) * self.series_x(t).real

    def coeff_d(self, t: float) -> float:
        return self.envelope(t) * self.series_d(t).real

    def coeff_1(self, t: float) -> float:
        return self.envelope(t) * self.series_1(t).real

    def operator(self, t: float) -> DiffOperator:
        return DiffOperator({
            (1, 0): self.coeff_x(t),
            (0, 1): -1j * self.coeff_d(t),
            (0, 0): self.coeff_1(t),
        })

    @property
    def closed_form(self) -> bool:
        return all(f.closed_form for f in (self.series_x, self.series_d, self.series_1))


def _first_order_weights(closure: KrylovClosure):
    """Per-power weights on x, d and 1 for the first-order read-out."""
    for p in closure.powers:
        if any(k not in _BASIS for k in p.terms):
            raise NotFirstOrderError(f"adjoint power {p} leaves the first-order family")
    wx = [complex(p.coeff(1, 0)) for p in closure.powers]
    # coefficient of d is -i B, so B = i * coeff
    wd = [1j * complex(p.coeff(0, 1)) for p in closure.powers]
    w1 = [complex(p.coeff(0, 0)) for p in closure.powers]
    return wx, wd, w1


def effective_hamiltonian(h0: DiffOperator, hint: ScaledPerturbation,
                          max_order: int = MAX_ORDER, tol: float = 1e-12) -> EffectiveHamiltonian:
    """Resum  e^{itH0} H_int e^{-itH0}  into closed-form coefficients.

    Raises
    ------
    NoClosedFormError
        The series did not terminate or close within ``max_order``.
    NotFirstOrderError
        Some adjoint power is not of the form a x + b d + c.
    """
    if max_order < 2:
        raise ValueError("max_order must be at least 2")
    sx, sd, s1 = _resummed(h0, hint.spatial, max_order, tol)
    return EffectiveHamiltonian(sx, sd, s1, hint.strength, hint.profile)


@lru_cache(maxsize=32)
def _resummed(h0, spatial, max_order, tol):
    closure = find_closure(h0, spatial, max_order, tol)
    wx, wd, w1 = _first_order_weights(closure)
    parts = _series_functions(closure)
    return _combine(parts, wx), _combine(parts, wd), _combine(parts, w1)


def heisenberg_map(h0: DiffOperator, obs: DiffOperator, t: float,
                   max_order: int = MAX_ORDER, tol: float = 1e-12) -> DiffOperator:
    """``e^{itH0} obs e^{-itH0}`` with numeric coefficients at time ``t``."""
    closure = find_closure(h0, obs, max_order, tol)
    gen = closure.generator()
    g = scipy.linalg.expm(1j * t * gen)[:, 0]
    out = DiffOperator()
    for gj, p in zip(g, closure.powers):
        out = out + p.scale(complex(gj))
    return out.map_coefficients(lambda c: _clean(complex(c), 1e-15))


def series_partial_sum(h0: DiffOperator, hint: ScaledPerturbation, t: float, n_terms: int) -> DiffOperator:
    """``envelope(t) * sum_{n < n_terms} (it)^n / n! ad^n(spatial)``."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    total = DiffOperator()
    power = hint.spatial
    for n in range(n_terms):
        if power.is_zero():
            break
        total = total + power.scale((1j * t) ** n / math.factorial(n))
        power = commutator(h0, power)
    return total.scale(hint.envelope(t))
