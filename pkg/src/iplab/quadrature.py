"""Adaptive Simpson quadrature.

Used for the table switching profiles and for phase integrals whose
integrands have no closed form.  Integrands here are piecewise smooth, so
callers pass the kink locations as ``breakpoints`` and each smooth piece
is integrated separately.
"""
import math

from .errors import QuadratureError

DEFAULT_TOL = 1e-12
MAX_DEPTH = 50


def _simpson(fa, fm, fb, a, b):
    return (b - a) * (fa + 4.0 * fm + fb) / 6.0


def adaptive_simpson(f, a, b, tol=DEFAULT_TOL, max_depth=MAX_DEPTH):
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Uses the classic recursive scheme with Richardson correction.  The
    recursion is unrolled onto an explicit stack so deep refinement near a
    kink does not hit Python's recursion limit.

    Raises
    ------
    QuadratureError
        If some subinterval still misses its share of the tolerance at
        ``max_depth``.  The exception carries the estimate and the summed
        error bound.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(fa, fm, fb, a, b)

    total = 0.0
    residual = 0.0
    failed = False
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a_, b_, fa_, fm_, fb_, whole_, tol_, depth = stack.pop()
        m_ = 0.5 * (a_ + b_)
        lm, rm = 0.5 * (a_ + m_), 0.5 * (m_ + b_)
        flm, frm = f(lm), f(rm)
        left = _simpson(fa_, flm, fm_, a_, m_)
        right = _simpson(fm_, frm, fb_, m_, b_)
        delta = left + right - whole_
        # tolerance floor keeps round-off from driving endless bisection
        floor = 64.0 * math.ulp(max(abs(left), abs(right), 1e-300))
        if abs(delta) <= max(15.0 * tol_, floor) or (b_ - a_) < 1e-14 * max(1.0, abs(a_)):
            total += left + right + delta / 15.0
            residual += abs(delta) / 15.0
        elif depth >= max_depth:
            total += left + right + delta / 15.0
            residual += abs(delta) / 15.0
            failed = True
        else:
            stack.append((a_, m_, fa_, flm, fm_, left, 0.5 * tol_, depth + 1))
            stack.append((m_, b_, fm_, frm, fb_, right, 0.5 * tol_, depth + 1))

    if failed:
        raise QuadratureError(
            f"adaptive Simpson did not converge on [{a}, {b}] "
            f"(achieved residual {residual:.3e}, requested {tol:.1e})",
            estimate=sign * total,
            residual=residual,
        )
    return sign * total


def integrate(f, a, b, breakpoints=(), tol=DEFAULT_TOL):
    """Integrate ``f`` over ``[a, b]``, splitting at interior ``breakpoints``.

    The tolerance is shared evenly between the pieces.
    """
    if a == b:
        return 0.0
    if b < a:
        return -integrate(f, b, a, breakpoints, tol)
    cuts = sorted({p for p in breakpoints if a < p < b})
    edges = [a, *cuts, b]
    share = tol / (len(edges) - 1)
    return math.fsum(
        adaptive_simpson(f, lo, hi, share) for lo, hi in zip(edges[:-1], edges[1:])
    )


class CumulativeIntegral:
    """``F(t) = integral of f over [0, t]`` for many t, reusing work.

    Values at anchor points (multiples of ``step`` merged with the
    breakpoints) are accumulated once and cached, so each new ``t`` costs
    one short adaptive integral from the nearest anchor below it.
    """

    def __init__(self, f, breakpoints=(), tol=DEFAULT_TOL, step=0.25):
        self.f = f
        self.tol = tol
        self.step = step
        self.breakpoints = tuple(sorted({float(p) for p in breakpoints if p > 0}))
        self._anchors = [0.0]
        self._values = [0.0]
        self._memo = {}

    def _next_anchor(self, a):
        nxt = (math.floor(a / self.step + 1e-12) + 1) * self.step
        for p in self.breakpoints:
            if a < p < nxt:
                return p
        return nxt

    def __call__(self, t):
        t = float(t)
        if t <= 0.0:
            return 0.0
        if t in self._memo:
            return self._memo[t]
        while self._anchors[-1] < t:
            a = self._anchors[-1]
            b = self._next_anchor(a)
            self._values.append(self._values[-1] + adaptive_simpson(self.f, a, b, self.tol))
            self._anchors.append(b)
        # bisect for the last anchor <= t
        lo, hi = 0, len(self._anchors) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._anchors[mid] <= t:
                lo = mid
            else:
                hi = mid - 1
        value = self._values[lo] + adaptive_simpson(self.f, self._anchors[lo], t, self.tol)
        if len(self._memo) < 100_000:
            self._memo[t] = value
        return value
