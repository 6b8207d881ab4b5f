import math

import numpy as np
import pytest

from gaitlab.exceptions import FitError
from gaitlab.models.estimate import TrajectoryDataset
from gaitlab.models.gait import TWO_PI, GaitParams
from gaitlab.services.analysis import (circular_mean, estimate_gait, estimate_lateral_phase_lag, estimate_phi_bc,
                                       fit_body_fourier, fit_leg_model, synthesize_dataset)


def angular_distance(a, b):
    return abs((a - b + math.pi) % TWO_PI - math.pi)


@pytest.fixture
def walking_dataset(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3, phi_0=math.pi / 3)
    return synthesize_dataset(hexapod, g, cycles=3, samples_per_cycle=200)


def test_leg_fit_recovers_waveform(walking_dataset):
    fit = fit_leg_model(walking_dataset.legs[("left", 1)], walking_dataset.time)
    assert fit.D == pytest.approx(0.6, abs=0.01)
    assert fit.amplitude == pytest.approx(math.radians(10.0), rel=1e-3)
    assert fit.period == pytest.approx(1.0, rel=1e-3)
    assert angular_distance(fit.phase, 0.0) < 0.01
    assert fit.residual < 1e-4


def test_leg_fit_tolerates_noise(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3)
    data = synthesize_dataset(hexapod, g, cycles=3, samples_per_cycle=200, noise=0.05, seed=7)
    fit = fit_leg_model(data.legs[("left", 2)], data.time)
    assert fit.D == pytest.approx(0.6, abs=0.05)


def test_leg_fit_phase_refers_to_time_zero(walking_dataset):
    shifted = walking_dataset.time + 0.37
    base = fit_leg_model(walking_dataset.legs[("left", 1)], walking_dataset.time)
    moved = fit_leg_model(walking_dataset.legs[("left", 1)], shifted)
    assert moved.D == pytest.approx(base.D, abs=1e-6)
    assert angular_distance(moved.phase, base.phase - TWO_PI * 0.37 / base.period) < 1e-6


def test_flat_series_rejected():
    time = np.linspace(0.0, 3.0, 300)
    with pytest.raises(FitError):
        fit_leg_model(np.zeros_like(time), time)


def test_short_series_rejected(walking_dataset):
    with pytest.raises(FitError):
        fit_leg_model(walking_dataset.legs[("left", 1)][:200], walking_dataset.time[:200])


def test_circular_mean_wraps():
    assert angular_distance(circular_mean([TWO_PI - 0.1, 0.1]), 0.0) < 1e-12


@pytest.mark.parametrize("Phi", [0.0, 0.3, 0.5, 0.92])
def test_lateral_phase_lag_from_phases(Phi):
    phases = {}
    for pair in (1, 2, 3):
        phases[("left", pair)] = (TWO_PI * (pair - 1) * Phi) % TWO_PI
        phases[("right", pair)] = (math.pi + TWO_PI * (pair - 1) * Phi) % TWO_PI
    assert estimate_lateral_phase_lag(phases) == pytest.approx(Phi, abs=1e-9)


def test_lateral_phase_lag_needs_adjacent_legs():
    with pytest.raises(FitError):
        estimate_lateral_phase_lag({("left", 1): 0.0, ("right", 1): math.pi})


def test_body_fourier_phase_is_lead():
    time = np.linspace(0.0, 2.0, 400, endpoint=False)
    fit = fit_body_fourier(0.4 * np.cos(TWO_PI * time + 1.1), time, 1.0)
    assert fit.oscillatory
    assert fit.amplitude == pytest.approx(0.4)
    assert fit.phase == pytest.approx(1.1)


def test_body_fourier_without_oscillation():
    time = np.linspace(0.0, 2.0, 400, endpoint=False)
    fit = fit_body_fourier(np.full_like(time, 0.3), time, 1.0)
    assert not fit.oscillatory
    assert fit.coefficients[0] == pytest.approx(0.3)
    assert fit.phase == 0.0


def test_body_fourier_singular_design():
    with pytest.raises(FitError):
        fit_body_fourier(np.ones(10), np.zeros(10), 1.0)


def test_phi_bc_is_circular():
    assert estimate_phi_bc(1.0, 1.0) == 0.0
    assert estimate_phi_bc(0.1, 0.3) == pytest.approx(TWO_PI - 0.2)


def test_estimate_round_trip(walking_dataset):
    estimate = estimate_gait(walking_dataset)
    assert estimate.D == pytest.approx(0.6, abs=0.02)
    assert estimate.Phi_lat == pytest.approx(0.3, abs=0.02)
    assert angular_distance(estimate.phi_bc, 5 * math.pi / 3) < 0.02
    assert set(estimate.leg_phases) == {"L1", "L2", "L3", "R1", "R2", "R3"}
    assert "alpha_1" in estimate.residuals


ROUND_TRIP_D = [0.4, 0.5, 0.6, 0.7, 0.8]
ROUND_TRIP_PHI = [0.1, 0.3, 0.5, 0.7, 0.9]


@pytest.mark.parametrize("D", ROUND_TRIP_D)
@pytest.mark.parametrize("Phi", ROUND_TRIP_PHI)
def test_round_trip_over_gait_grid(hexapod, D, Phi):
    g = GaitParams.for_robot(hexapod, D, Phi, phi_0=1.0)
    estimate = estimate_gait(synthesize_dataset(hexapod, g))
    assert estimate.D == pytest.approx(D, abs=0.02)
    assert estimate.Phi_lat == pytest.approx(Phi, abs=0.02)
    assert angular_distance(estimate.phi_bc, TWO_PI - 1.0) < 0.02


@pytest.mark.slow
@pytest.mark.parametrize("D", ROUND_TRIP_D)
@pytest.mark.parametrize("Phi", ROUND_TRIP_PHI)
def test_noisy_round_trip_over_gait_grid(hexapod, D, Phi):
    g = GaitParams.for_robot(hexapod, D, Phi, phi_0=1.0)
    estimate = estimate_gait(synthesize_dataset(hexapod, g, noise=0.05, seed=11))
    assert estimate.D == pytest.approx(D, abs=0.05)
    assert estimate.Phi_lat == pytest.approx(Phi, abs=0.05)
    assert angular_distance(estimate.phi_bc, TWO_PI - 1.0) < 0.1


def test_estimate_of_tripod(hexapod):
    g = GaitParams.for_robot(hexapod, 0.5, 0.5)
    estimate = estimate_gait(synthesize_dataset(hexapod, g))
    assert estimate.Phi_lat == pytest.approx(0.5, abs=0.02)
    assert estimate.phi_bc_predicted == pytest.approx(math.pi, abs=1e-2)


def test_estimate_without_body_wave(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3, undulation="fixed_straight")
    estimate = estimate_gait(synthesize_dataset(hexapod, g))
    assert estimate.phi_bc is None


def test_estimate_is_shift_equivariant(walking_dataset):
    moved = TrajectoryDataset(time=walking_dataset.time + 0.25, legs=walking_dataset.legs,
                              body=walking_dataset.body)
    base = estimate_gait(walking_dataset)
    shifted = estimate_gait(moved)
    assert shifted.D == pytest.approx(base.D, abs=1e-6)
    assert shifted.Phi_lat == pytest.approx(base.Phi_lat, abs=1e-6)
    assert angular_distance(shifted.phi_bc, base.phi_bc) < 1e-6


def test_synthetic_dataset_records_footfalls(walking_dataset):
    assert len(walking_dataset.footfalls[("left", 1)]) == 2
    assert walking_dataset.time.shape == (600,)


def test_synthetic_dataset_needs_legs(sidewinder):
    with pytest.raises(ValueError):
        synthesize_dataset(sidewinder, GaitParams.for_robot(sidewinder, 0.5, 0.25))
