import math

import numpy as np
import pytest
from scipy import integrate as spi

from iplab.exact_solver import (
    displacement, evaluate_psi, global_phase, momentum_phase, pde_residual, solve,
)
from iplab.scenarios import PRESETS, Scenario
from iplab.special_functions import SwitchingProfile, kelly_eval, table_profile

RAMP = SwitchingProfile("ramp", rate=1.0)


def _solution(name, strength=1.0, profile=None, method="auto"):
    sc = Scenario(name, strength, profile or SwitchingProfile())
    return sc, solve(sc.effective, sc.bump, method)


class TestExamples:
    def test_free_kick_translation(self, norm_bump):
        _, sol = _solution("free-kick")
        x = np.linspace(-2, 4, 301)
        for t in (0.5, 1.0, 2.0):
            np.testing.assert_allclose(evaluate_psi(sol, t, x), kelly_eval(norm_bump, x - t), atol=1e-15)
        assert abs(evaluate_psi(sol, 2.0, 2.0)) ** 2 == pytest.approx(kelly_eval(norm_bump, 0.0) ** 2, rel=1e-14)

    def test_constant_field(self):
        _, sol = _solution("constant-field")
        for t in (0.5, 1.0, 3.0):
            assert displacement(sol, t) == pytest.approx(t * t / 2, abs=1e-14)
            assert momentum_phase(sol, t) == pytest.approx(t, abs=1e-14)
            assert global_phase(sol, t) == pytest.approx(t ** 3 / 3, abs=1e-13)
        assert global_phase(sol, 1.0) == pytest.approx(1 / 3, abs=1e-15)

    def test_zero_strength(self, norm_bump):
        for name in PRESETS:
            _, sol = _solution(name, strength=0.0)
            x = np.linspace(-1.5, 1.5, 41)
            for t in (0.0, 1.0, 4.0):
                np.testing.assert_allclose(evaluate_psi(sol, t, x), kelly_eval(norm_bump, x), atol=0)

    def test_displacement_examples(self):
        assert displacement(_solution("free-kick")[1], 1.0) == pytest.approx(1.0, abs=1e-15)
        assert displacement(_solution("free-kick", profile=RAMP)[1], 2.0) == pytest.approx(2.0, abs=1e-15)
        assert displacement(_solution("driven-oscillator", 0.5)[1], math.pi) == pytest.approx(1.0, abs=1e-15)

    def test_momentum_phase_examples(self):
        assert momentum_phase(_solution("constant-field")[1], 1.0) == pytest.approx(1.0, abs=1e-15)
        assert momentum_phase(_solution("driven-oscillator")[1], math.pi / 2) == pytest.approx(1.0, abs=1e-15)
        for name in PRESETS:
            assert momentum_phase(_solution(name)[1], 0.0) == 0.0

    def test_global_phase_examples(self):
        _, free = _solution("free-kick")
        assert all(global_phase(free, t) == 0.0 for t in (0.5, 3.0, 9.0))
        _, drv = _solution("driven-oscillator")
        ref, _ = spi.quad(lambda s: math.sin(s) * math.sin(s), 0, math.pi, epsabs=1e-14)
        assert global_phase(drv, math.pi) == pytest.approx(ref, abs=1e-12)
        assert global_phase(drv, math.pi) == pytest.approx(math.pi / 2, abs=1e-14)

    def test_kicked_oscillator_phase(self):
        _, sol = _solution("kicked-oscillator", 0.8)
        t = 2.2
        assert displacement(sol, t) == pytest.approx(0.8 * math.sin(t), abs=1e-14)
        assert momentum_phase(sol, t) == pytest.approx(0.8 * (math.cos(t) - 1), abs=1e-14)
        # gamma' = B P with B = l cos, P = l (cos - 1)
        ref, _ = spi.quad(lambda s: 0.64 * math.cos(s) * (math.cos(s) - 1), 0, t, epsabs=1e-14)
        assert global_phase(sol, t) == pytest.approx(ref, abs=1e-12)

    def test_initial_condition(self, norm_bump):
        for name in PRESETS:
            _, sol = _solution(name)
            x = np.linspace(-1.2, 1.2, 50)
            np.testing.assert_array_equal(evaluate_psi(sol, 0.0, x), kelly_eval(norm_bump, x))


class TestRoutesAgree:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    @pytest.mark.parametrize("profile", [SwitchingProfile(), SwitchingProfile("ramp", rate=0.4)])
    def test_closed_vs_quadrature(self, name, profile):
        _, closed = _solution(name, 0.9, profile, "closed")
        _, quad = _solution(name, 0.9, profile, "quadrature")
        assert closed.method == "closed" and quad.method == "quadrature"
        for t in (0.3, 1.0, math.pi, 5.5):
            for a, b in ((closed.displacement, quad.displacement),
                         (closed.momentum_phase, quad.momentum_phase),
                         (closed.global_phase, quad.global_phase)):
                assert abs(a(t) - b(t)) <= 1e-10

    def test_table_uses_quadrature(self):
        prof = table_profile([(0.0, 0.0), (1.0, 1.0), (4.0, 1.0)])
        _, sol = _solution("constant-field", 1.0, prof)
        assert sol.method == "quadrature"
        # theta = t on [0,1] then 1:  X = int tau*theta
        assert displacement(sol, 1.0) == pytest.approx(1 / 3, abs=1e-12)
        assert displacement(sol, 2.0) == pytest.approx(1 / 3 + 1.5, abs=1e-12)
        with pytest.raises(ValueError):
            solve(Scenario("constant-field", 1.0, prof).effective, sol.bump, "closed")

    def test_unknown_method(self, norm_bump):
        sc = Scenario("free-kick")
        with pytest.raises(ValueError):
            solve(sc.effective, norm_bump, "magic")


class TestTransport:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_support_and_modulus(self, name, norm_bump):
        _, sol = _solution(name, 0.7)
        for t in (0.4, 2.0, 5.0):
            lo, hi = sol.support(t)
            X = displacement(sol, t)
            assert (lo, hi) == (norm_bump.alpha + X, norm_bump.beta + X)
            x = np.linspace(lo - 3, hi + 3, 997)
            psi = evaluate_psi(sol, t, x)
            outside = (x <= lo) | (x >= hi)
            assert np.all(psi[outside] == 0)
            np.testing.assert_allclose(np.abs(psi), kelly_eval(norm_bump, x - X), atol=1e-15)


class TestResidual:
    def test_second_order_in_h(self):
        sc, sol = _solution("constant-field")
        r = [pde_residual(sol, sc.effective, 1.0, 0.6, h) for h in (4e-3, 2e-3, 1e-3)]
        orders = [math.log2(r[i] / r[i + 1]) for i in range(2)]
        assert min(orders) > 1.9

    def test_outside_support_is_zero(self):
        sc, sol = _solution("constant-field")
        assert pde_residual(sol, sc.effective, 1.0, 5.0, 1e-3) == 0.0

    def test_driven_oscillator_small(self):
        sc, sol = _solution("driven-oscillator")
        X = displacement(sol, 1.0)
        for x in (X - 0.5, X, X + 0.3):
            assert pde_residual(sol, sc.effective, 1.0, x, 1e-4) <= 1e-6

    def test_bad_step(self):
        sc, sol = _solution("free-kick")
        with pytest.raises(ValueError):
            pde_residual(sol, sc.effective, 1.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            pde_residual(sol, sc.effective, 1e-5, 0.0, 1e-3)
