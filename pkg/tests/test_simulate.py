import math

import numpy as np
import pytest

from gaitlab.models.gait import TWO_PI, GaitParams
from gaitlab.models.pose import Pose
from gaitlab.services.simulate import cycle_displacement, cycle_nodes, integrate_gait, speed_blc

STEPS = 64


def test_nodes_include_contact_switches(hexapod):
    g = GaitParams.for_robot(hexapod, 0.55, 0.3)
    nodes = cycle_nodes(hexapod, g, STEPS)
    assert nodes[0] == 0.0 and nodes[-1] == TWO_PI
    assert np.all(np.diff(nodes) > 0)
    assert np.any(np.isclose(nodes, TWO_PI * 0.55))


def test_zero_amplitude_stays_put(hexapod):
    g = GaitParams(D=0.6, Phi_lat=0.3, A_theta=0.0, A_alpha=0.0)
    traj = integrate_gait(hexapod, g, cycles=2, steps_per_cycle=STEPS)
    assert traj.per_cycle == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)
    assert np.abs(traj.poses).max() < 1e-12


def test_trajectory_layout(hexapod, tripod):
    traj = integrate_gait(hexapod, tripod, cycles=2, steps_per_cycle=STEPS)
    assert traj.complete
    assert traj.times[0] == 0.0
    assert traj.times[-1] == pytest.approx(2.0)
    assert traj.poses.shape == (len(traj.times), 3)
    assert traj.samples[0] == (0.0, (0.0, 0.0, 0.0))


def test_tripod_walks_forward(hexapod, tripod):
    traj = integrate_gait(hexapod, tripod, steps_per_cycle=STEPS)
    dx, dy, dtheta = traj.per_cycle
    assert dx > 0.01
    assert speed_blc(traj) == pytest.approx(math.hypot(dx, dy))


def test_cycles_compose(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3, phi_0=1.0)
    traj = integrate_gait(hexapod, g, cycles=2, steps_per_cycle=STEPS)
    one = Pose(*traj.per_cycle)
    assert traj.final_pose == pytest.approx(one.compose(one).as_array(), abs=1e-6)


def test_start_pose_is_left_multiplied(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3, phi_0=1.0)
    start = Pose(0.5, -0.3, 0.8)
    plain = integrate_gait(hexapod, g, steps_per_cycle=STEPS)
    moved = integrate_gait(hexapod, g, steps_per_cycle=STEPS, start=start)
    expected = start.compose(Pose(*plain.final_pose)).as_array()
    assert moved.final_pose == pytest.approx(expected, abs=1e-9)


def test_straight_back_gaits_do_not_turn(quadruped):
    g = GaitParams.for_robot(quadruped, 0.5, 0.5, undulation="fixed_straight")
    dx, dy, dtheta = integrate_gait(quadruped, g, steps_per_cycle=STEPS).per_cycle
    assert abs(dtheta) < 1e-3
    assert abs(dy) < 1e-3


def test_mirrored_gait_reflects_displacement(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3, phi_0=1.0)
    dx, dy, dtheta = integrate_gait(hexapod, g, steps_per_cycle=STEPS).per_cycle
    mirrored = integrate_gait(hexapod, g.mirror(), steps_per_cycle=STEPS).per_cycle
    assert mirrored == pytest.approx((dx, -dy, -dtheta), abs=1e-6)


def test_displacement_does_not_depend_on_cycle_period(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3, phi_0=1.0)
    fast = integrate_gait(hexapod, g, steps_per_cycle=STEPS, cycle_period=1.0).per_cycle
    slow = integrate_gait(hexapod, g, steps_per_cycle=STEPS, cycle_period=3.0).per_cycle
    assert slow == pytest.approx(fast, abs=1e-6)


def test_step_halving_converges(hexapod, tripod):
    coarse = integrate_gait(hexapod, tripod, steps_per_cycle=128).per_cycle
    fine = integrate_gait(hexapod, tripod, steps_per_cycle=256).per_cycle
    assert math.hypot(fine[0] - coarse[0], fine[1] - coarse[1]) < 5e-3 * math.hypot(fine[0], fine[1])


def test_flight_phases_are_recorded(quadruped):
    g = GaitParams.for_robot(quadruped, 0.3, 0.5)
    traj = integrate_gait(quadruped, g, steps_per_cycle=STEPS)
    assert traj.complete
    assert traj.no_support_phases
    assert all(0.0 < phi < TWO_PI for phi in traj.no_support_phases)


def test_linearized_model_matches_without_body_wave(hexapod, small_amplitude_hexapod):
    g = small_amplitude_hexapod.straight()
    exact = integrate_gait(hexapod, g, steps_per_cycle=STEPS).per_cycle
    linear = integrate_gait(hexapod, g, steps_per_cycle=STEPS, velocity_model="linearized").per_cycle
    assert linear == pytest.approx(exact, rel=0.1, abs=1e-3)


def test_argument_checks(hexapod, tripod):
    with pytest.raises(ValueError):
        integrate_gait(hexapod, tripod, steps_per_cycle=10)
    with pytest.raises(ValueError):
        integrate_gait(hexapod, tripod, cycles=0)
    with pytest.raises(ValueError):
        integrate_gait(hexapod, tripod, velocity_model="euler")


def test_sidewinder_objective_is_speed(sidewinder):
    g = GaitParams.for_robot(sidewinder, 0.5, 0.25, phi_0=math.pi / 2)
    traj = integrate_gait(sidewinder, g, steps_per_cycle=STEPS)
    assert cycle_displacement(sidewinder, g, STEPS) == pytest.approx(speed_blc(traj))


def test_hexapod_cycle_completes_at_low_phase_lag(hexapod):
    g = GaitParams.for_robot(hexapod, 0.5, 0.1)
    traj = integrate_gait(hexapod, g, steps_per_cycle=128)
    assert traj.complete
    assert math.isfinite(cycle_displacement(hexapod, g, 128))


def test_objective_choice(hexapod):
    g = GaitParams.for_robot(hexapod, 0.6, 0.3, phi_0=1.0)
    traj = integrate_gait(hexapod, g, steps_per_cycle=STEPS)
    assert cycle_displacement(hexapod, g, STEPS) == traj.per_cycle[0]
    assert cycle_displacement(hexapod, g, STEPS, "forward") == traj.per_cycle[0]
    assert cycle_displacement(hexapod, g, STEPS, "blc") == pytest.approx(speed_blc(traj))
    with pytest.raises(ValueError):
        cycle_displacement(hexapod, g, STEPS, "sideways")


@pytest.mark.slow
def test_straight_myriapod_speed_barely_depends_on_phase_lag(myriapod):
    speeds = np.array([
        speed_blc(integrate_gait(myriapod, GaitParams.for_robot(myriapod, 0.5, Phi, undulation="fixed_straight"),
                                 steps_per_cycle=STEPS))
        for Phi in np.arange(1, 10) / 10.0
    ])
    assert np.all(speeds > 0.0)
    assert speeds.std() / speeds.mean() < 0.10
