import math

import numpy as np
import pytest

from gaitlab.models.gait import GaitParams, ShapePoint
from gaitlab.models.pose import Pose
from gaitlab.models.robot import Configuration
from gaitlab.models.stability import StabilityClass
from gaitlab.services.gait import configuration_at
from gaitlab.services.morphology import forward_kinematics, make_reference_robot
from gaitlab.services.stability import (classify, metric_from_classes, phase_classification, stability_metric,
                                        support_polygon)


def test_tripod_is_always_stable(hexapod, tripod):
    assert stability_metric(hexapod, tripod, 360) == pytest.approx(1.0)


def test_tripod_support_triangle(hexapod, tripod):
    poses = forward_kinematics(hexapod, configuration_at(hexapod, tripod, ShapePoint(math.pi / 4, 0.0)))
    assert support_polygon(poses).shape == (3, 2)
    assert classify(hexapod, poses) == StabilityClass.STATICALLY_STABLE


def test_pace_lifts_a_whole_side(quadruped):
    g = GaitParams.for_robot(quadruped, 0.5, 0.0)
    poses = forward_kinematics(quadruped, configuration_at(quadruped, g.straight(), ShapePoint(1.5 * math.pi, 0.0)))
    assert classify(quadruped, poses) == StabilityClass.UNSTABLE
    assert stability_metric(quadruped, g, 360) == 0.0


def test_full_stance_is_stable(quadruped):
    g = GaitParams.for_robot(quadruped, 1.0, 0.3)
    assert stability_metric(quadruped, g, 360) == pytest.approx(1.0)


@pytest.mark.parametrize("Phi", [0.0, 0.25, 0.5, 0.75])
def test_quadruped_at_half_duty_is_never_statically_stable(quadruped, Phi):
    g = GaitParams.for_robot(quadruped, 0.5, Phi)
    assert stability_metric(quadruped, g, 360) == 0.0


def test_myriapod_half_duty_half_lag_is_stable(myriapod):
    g = GaitParams.for_robot(myriapod, 0.5, 0.5)
    assert stability_metric(myriapod, g, 360) == pytest.approx(1.0)


def test_classification_is_invariant_to_placement(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3).straight()
    for phi in np.linspace(0.1, 6.0, 9):
        cfg = configuration_at(hexapod, g, ShapePoint(phi, phi))
        local = classify(hexapod, forward_kinematics(hexapod, cfg))
        placed = classify(hexapod, forward_kinematics(hexapod, cfg, base=Pose(2.0, -1.0, 2.3)))
        assert local == placed


def test_metric_is_a_fraction(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3)
    metric = stability_metric(hexapod, g, 360)
    assert 0.0 <= metric <= 1.0


def test_limbless_chain_without_contact_is_unstable(sidewinder):
    n = sidewinder.n_links
    cfg = Configuration(np.zeros(n - 1), np.zeros(0), np.zeros(0), np.zeros(0), np.zeros(0), np.zeros(n, dtype=int))
    assert classify(sidewinder, forward_kinematics(sidewinder, cfg)) == StabilityClass.UNSTABLE


def test_straight_limbless_chain_has_no_support_area(sidewinder):
    n = sidewinder.n_links
    cfg = Configuration(np.zeros(n - 1), np.zeros(0), np.zeros(0), np.zeros(0), np.zeros(0), np.ones(n, dtype=int))
    poses = forward_kinematics(sidewinder, cfg)
    assert support_polygon(poses, legged=False).shape == (0, 2)
    assert classify(sidewinder, poses) == StabilityClass.STATICALLY_UNSTABLE


def test_phase_classification_samples(hexapod, tripod):
    phases, classes = phase_classification(hexapod, tripod, 360)
    assert len(phases) == len(classes) == 360
    assert phases[0] == pytest.approx(math.pi / 360)


def test_too_few_samples_rejected(hexapod, tripod):
    with pytest.raises(ValueError):
        stability_metric(hexapod, tripod, 100)


def test_metric_from_classes():
    stable, marginal, unstable = (StabilityClass.STATICALLY_STABLE, StabilityClass.STATICALLY_UNSTABLE,
                                  StabilityClass.UNSTABLE)
    assert metric_from_classes([stable, stable, marginal, stable]) == 0.75
    assert metric_from_classes([stable, unstable]) == 0.0
    assert metric_from_classes([]) == 0.0


TREND_D = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
TREND_PHI = [k / 20 for k in range(20)]


@pytest.fixture(scope="module")
def metric_tables():
    """Stability metric per legged robot over the (D, Phi_lat) trend grid."""
    tables = {}
    for name in ("quadruped", "hexapod", "myriapod"):
        spec = make_reference_robot(name)
        tables[name] = np.array([[stability_metric(spec, GaitParams.for_robot(spec, D, Phi), 360)
                                  for Phi in TREND_PHI] for D in TREND_D])
    return tables


@pytest.mark.slow
@pytest.mark.parametrize("robot", ["quadruped", "hexapod", "myriapod"])
def test_metric_does_not_decrease_with_duty_factor(metric_tables, robot):
    assert np.all(np.diff(metric_tables[robot], axis=0) >= 0.0)


@pytest.mark.slow
def test_metric_grows_with_leg_count(metric_tables):
    assert np.all(metric_tables["myriapod"] >= metric_tables["hexapod"])
    assert np.all(metric_tables["hexapod"] >= metric_tables["quadruped"])


@pytest.mark.slow
def test_hexapod_metric_peaks_at_the_tripod(metric_tables):
    distance = np.abs(np.array(TREND_PHI) - 0.5)
    closer = distance[:, None] < distance[None, :] - 1e-9
    for D, row in zip(TREND_D, metric_tables["hexapod"]):
        if D < 0.5:
            continue
        assert np.all(row[:, None] >= row[None, :], where=closer), f"D={D}"
