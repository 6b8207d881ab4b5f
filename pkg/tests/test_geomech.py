import math

import numpy as np
import pytest

from gaitlab.exceptions import HeightFieldError, SolverError
from gaitlab.models.field import HeightField
from gaitlab.models.gait import TWO_PI, GaitParams, GaitPath
from gaitlab.services import geomech
from gaitlab.services.geomech import (compute_height_field, curl, line_integral, optimize_phase_offset,
                                      phase_lag_from_offset, phase_relation_prediction, region_weights,
                                      stokes_displacement)
from gaitlab.services.simulate import cycle_displacement, integrate_gait


def field_from(connection_fn, resolution=64):
    """HeightField built from an analytic connection A(phi_c, phi_b) -> (3, 2)."""
    phases = TWO_PI * (np.arange(resolution) + 0.5) / resolution
    c, b = np.meshgrid(phases, phases, indexing="ij")
    connection = connection_fn(c, b)
    return HeightField(resolution=resolution, values=curl(connection, TWO_PI / resolution), connection=connection)


def constant(c, b):
    table = np.zeros(c.shape + (3, 2))
    table[..., 0, 0] = 0.3
    table[..., 0, 1] = -0.1
    table[..., 1, 0] = 1.0
    table[..., 1, 1] = 2.0
    return table


def trigonometric(c, b):
    table = np.zeros(c.shape + (3, 2))
    table[..., 0, 0] = np.sin(c) * np.sin(b)
    table[..., 0, 1] = np.cos(c) * np.cos(b)
    table[..., 2, 0] = np.sin(b)
    return table


def test_region_weights_cover_the_square():
    h = field_from(constant, resolution=32)
    weights = region_weights(h, 1.0)
    assert np.all(weights <= 1.0) and np.all(weights >= -1.0)
    # upper triangle minus lower triangle: areas (2pi - phi_0)^2 / 2 and phi_0^2 / 2
    expected = 0.5 * (TWO_PI - 1.0) ** 2 - 0.5 * 1.0 ** 2
    assert weights.sum() * h.cell ** 2 == pytest.approx(expected, rel=1e-9)


def test_curl_of_constant_connection_is_zero():
    h = field_from(constant)
    assert np.abs(h.values).max() < 1e-12


def test_height_function_sums_to_zero_on_torus():
    h = field_from(trigonometric)
    assert np.abs(h.values.sum(axis=(0, 1))).max() < 1e-9


@pytest.mark.parametrize("phi_0", [0.0, math.pi / 2, math.pi, 4.0])
def test_constant_connection_gives_loop_integrals(phi_0):
    h = field_from(constant)
    expected = (TWO_PI * 0.2, TWO_PI * 3.0, 0.0)
    path = GaitPath(phi_0)
    assert stokes_displacement(h, path) == pytest.approx(expected, abs=1e-9)
    assert line_integral(h, path) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("phi_0", [0.0, 0.7, 2.5, 5.0])
def test_stokes_matches_analytic_line_integral(phi_0):
    h = field_from(trigonometric, resolution=64)
    path = GaitPath(phi_0)
    dx, dy, dtheta = stokes_displacement(h, path)
    assert dx == pytest.approx(2.0 * math.pi * math.cos(phi_0), abs=2e-2)
    assert dy == pytest.approx(0.0, abs=1e-12)
    assert dtheta == pytest.approx(0.0, abs=2e-2)
    assert line_integral(h, path)[0] == pytest.approx(dx, abs=2e-2)


def test_only_unit_winding_supported():
    h = field_from(constant, resolution=32)
    with pytest.raises(ValueError):
        stokes_displacement(h, GaitPath(0.0, winding=(1, 2)))


def test_zero_amplitude_height_field_vanishes(hexapod):
    g = GaitParams(D=0.6, Phi_lat=0.3, A_theta=0.0, A_alpha=0.0)
    h = compute_height_field(hexapod, g, resolution=32)
    assert h.values.shape == (32, 32, 3)
    assert np.abs(h.values).max() < 1e-8


def test_straight_back_height_field_vanishes(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3, undulation="fixed_straight")
    h = compute_height_field(hexapod, g, resolution=32)
    assert np.abs(h.values).max() < 1e-8


def test_resolution_checked(hexapod, tripod):
    with pytest.raises(ValueError):
        compute_height_field(hexapod, tripod, resolution=8)


def test_too_many_failed_points_rejected(hexapod, tripod, monkeypatch):
    def failing(spec, g, resolution, workers=1):
        phases = TWO_PI * (np.arange(resolution) + 0.5) / resolution
        failures = [(float(c), 0.0) for c in phases[:resolution // 2]]
        return phases, np.zeros((resolution, resolution, 3, 2)), failures

    monkeypatch.setattr(geomech, "connection_table", failing)
    with pytest.raises(HeightFieldError) as e:
        compute_height_field(hexapod, tripod, resolution=32)
    assert len(e.value.failures) == 16


def test_optimizer_without_body_wave_keeps_first_offset(hexapod):
    g = GaitParams.for_robot(hexapod, 0.5, 0.5, A_alpha=0.0)
    best = optimize_phase_offset(hexapod, g, scan=8, steps_per_cycle=64)
    assert best.phi_0 == 0.0
    assert best.objective == "forward"
    assert best.displacement == cycle_displacement(hexapod, g.straight(), 64)
    assert best.failed_offsets == []


def test_optimizer_is_deterministic(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3)
    first = optimize_phase_offset(hexapod, g, scan=8, steps_per_cycle=64)
    second = optimize_phase_offset(hexapod, g, scan=8, steps_per_cycle=64)
    assert first == second
    assert 0.0 <= first.phi_0 < TWO_PI


def test_optimizer_requires_coordinated_undulation(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3, undulation="fixed_straight")
    with pytest.raises(ValueError):
        optimize_phase_offset(hexapod, g)


def test_optimizer_skips_failed_offsets(hexapod, monkeypatch):
    def objective(spec, g, steps, objective=None):
        if g.phi_0 < 1.0:
            raise SolverError("force balance did not converge")
        return math.cos(g.phi_0 - 3.0)

    monkeypatch.setattr(geomech, "cycle_displacement", objective)
    best = optimize_phase_offset(hexapod, GaitParams.for_robot(hexapod, 0.6, 0.3), scan=8, steps_per_cycle=64)
    assert best.phi_0 == pytest.approx(3.0, abs=1e-2)
    assert best.failed_offsets[:2] == [0.0, pytest.approx(TWO_PI / 8)]


def test_optimizer_fails_when_every_offset_fails(hexapod, monkeypatch):
    def objective(spec, g, steps, objective=None):
        raise SolverError("force balance did not converge")

    monkeypatch.setattr(geomech, "cycle_displacement", objective)
    with pytest.raises(SolverError):
        optimize_phase_offset(hexapod, GaitParams.for_robot(hexapod, 0.6, 0.3), scan=8, steps_per_cycle=64)


def test_phase_lag_from_offset():
    assert phase_lag_from_offset(math.pi / 3) == pytest.approx(5 * math.pi / 3)
    assert phase_lag_from_offset(0.0) == 0.0


@pytest.mark.parametrize("Phi,expected", [(0.0, math.pi / 2), (0.5, math.pi), (0.25, 0.75 * math.pi),
                                          (0.92, 1.42 * math.pi)])
def test_phase_relation_prediction(Phi, expected):
    assert phase_relation_prediction(Phi) == pytest.approx(expected)


@pytest.mark.slow
@pytest.mark.parametrize("robot", ["hexapod", "myriapod"])
def test_optimal_phase_lag_follows_phase_relation(robot, request):
    spec = request.getfixturevalue(robot)
    Phis = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
    lags = []
    for Phi in Phis:
        best = optimize_phase_offset(spec, GaitParams.for_robot(spec, 0.5, Phi), scan=32, steps_per_cycle=64)
        predicted = phase_relation_prediction(Phi)
        offset = (phase_lag_from_offset(best.phi_0) - predicted + math.pi) % TWO_PI - math.pi
        assert abs(offset) <= 0.15 * math.pi
        lags.append(predicted + offset)
    # predictions stay below 2 pi on this grid, so the lags need no unwrapping
    slope = np.polyfit(Phis, lags, 1)[0]
    assert slope == pytest.approx(math.pi, rel=0.15)


STOKES_GAITS = [(0.5, 0.2), (0.6, 0.35), (0.65, 0.5), (0.75, 0.65), (0.8, 0.85)]


@pytest.mark.slow
@pytest.mark.parametrize("D,Phi", STOKES_GAITS)
def test_stokes_estimate_tracks_simulation(hexapod, D, Phi):
    g = GaitParams(D=D, Phi_lat=Phi, A_theta=math.radians(2.0), A_alpha=math.radians(2.0))
    h = compute_height_field(hexapod, g, resolution=64)
    rng = np.random.default_rng(int(100 * D + 10 * Phi))
    for phi_0 in rng.uniform(0.0, TWO_PI, size=4):
        dx, _, _ = stokes_displacement(h, GaitPath(phi_0))
        simulated = integrate_gait(hexapod, g.with_phi_0(phi_0), steps_per_cycle=128).per_cycle[0]
        assert abs(dx - simulated) < max(0.1 * abs(simulated), 1e-3)


@pytest.mark.slow
def test_stokes_estimate_converges_under_grid_refinement(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3)
    path = GaitPath(1.0)
    coarse = stokes_displacement(compute_height_field(hexapod, g, resolution=64), path)
    fine = stokes_displacement(compute_height_field(hexapod, g, resolution=128), path)
    assert coarse[0] == pytest.approx(fine[0], rel=0.02)
