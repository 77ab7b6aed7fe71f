import math

import numpy as np
import pytest

from iplab.classical_oracle import classical_trajectory, closed_form_position
from iplab.errors import NoClosedFormError
from iplab.scenarios import PRESETS, Scenario
from iplab.special_functions import SwitchingProfile, table_profile


def test_free_kick_uniform_motion():
    tr = classical_trajectory(Scenario("free-kick"), 0.0, 0.0, 2.0, 1e-3)
    assert tr.position_at(2.0) == pytest.approx(2.0, abs=1e-12)
    np.testing.assert_allclose(tr.v[1:], 1.0)


def test_ramp_acceleration():
    sc = Scenario("free-kick", profile=SwitchingProfile("ramp", rate=1.0))
    tr = classical_trajectory(sc, 0.0, 0.0, 2.0, 1e-3)
    assert tr.position_at(2.0) == pytest.approx(2.0, abs=1e-12)


def test_driven_oscillator_turning_point():
    tr = classical_trajectory(Scenario("driven-oscillator"), 0.0, 0.0, math.pi, 1e-3)
    assert tr.x[-1] == pytest.approx(-2.0, abs=1e-10)
    assert tr.t[-1] == math.pi


@pytest.mark.parametrize("name, t, expected", [
    ("constant-field", 1.0, -0.5),
    ("free-kick", 1.0, 1.0),
    ("kicked-oscillator", math.pi / 2, 1.0),
])
def test_closed_form_examples(name, t, expected):
    assert closed_form_position(Scenario(name), t) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("name", sorted(PRESETS))
@pytest.mark.parametrize("profile", [SwitchingProfile(), SwitchingProfile("ramp", rate=0.5)])
def test_rk4_matches_closed_form(name, profile):
    sc = Scenario(name, 1.0, profile)
    tr = classical_trajectory(sc, 0.3, -0.2, 2 * math.pi, 1e-3)
    exact = np.array([closed_form_position(sc, t, 0.3, -0.2) for t in tr.t])
    assert np.max(np.abs(tr.x - exact)) <= 1e-8


def test_energy_bookkeeping():
    lam = 0.7
    tr = classical_trajectory(Scenario("driven-oscillator", lam), 0.4, 0.1, 2 * math.pi, 1e-3)
    energy = 0.5 * tr.v ** 2 + 0.5 * tr.x ** 2 + lam * tr.x
    assert np.ptp(energy) <= 1e-10


def test_table_has_no_closed_form():
    sc = Scenario("free-kick", profile=table_profile([(0, 0), (1, 1)]))
    with pytest.raises(NoClosedFormError):
        closed_form_position(sc, 1.0)
    tr = classical_trajectory(sc, 0.0, 0.0, 2.0, 1e-3)
    # v = theta, so x = t^2/2 up to 1 and then t - 1/2
    assert tr.position_at(2.0) == pytest.approx(1.5, abs=1e-9)


def test_uneven_final_step():
    tr = classical_trajectory(Scenario("free-kick"), 0.0, 0.0, 1.0005, 1e-3)
    assert tr.t[-1] == 1.0005
    assert tr.x[-1] == pytest.approx(1.0005, abs=1e-12)


def test_position_off_grid():
    tr = classical_trajectory(Scenario("free-kick"), 0.0, 0.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        tr.position_at(0.55)
    assert len(tr.samples) == 11


def test_bad_dt():
    with pytest.raises(ValueError):
        classical_trajectory(Scenario("free-kick"), 0.0, 0.0, 1.0, 0.0)
