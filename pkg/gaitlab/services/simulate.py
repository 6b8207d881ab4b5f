import logging
import math
from typing import Optional

import numpy as np

from ..config import DEFAULT_STEPS_PER_CYCLE, MIN_STEPS_PER_CYCLE
from ..exceptions import NoSupportError, SolverError
from ..models.gait import TWO_PI, GaitParams, ShapePoint, ShapeVelocity
from ..models.pose import Pose
from ..models.robot import RobotSpec
from ..models.trajectory import Trajectory
from .contact_mechanics import local_connection_at, solve_body_velocity
from .gait import contacts_at, switch_phases

logger = logging.getLogger(__name__)

VELOCITY_MODELS = ("exact", "linearized")
OBJECTIVES = ("forward", "blc")


def cycle_nodes(spec: RobotSpec, g: GaitParams, steps_per_cycle: int) -> np.ndarray:
    """Integration nodes over one cycle: the uniform grid plus every contact
    switch, so the contact pattern is constant inside each sub-interval."""
    uniform = TWO_PI * np.arange(steps_per_cycle + 1) / steps_per_cycle
    nodes = np.unique(np.concatenate([uniform, switch_phases(spec, g)]))
    keep = np.concatenate([[True], np.diff(nodes) > 1e-9])
    nodes = nodes[keep]
    nodes[-1] = TWO_PI
    return nodes


def _lifted(pose: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """T_e L_g applied to a body velocity: world-frame pose rate."""
    c, s = math.cos(pose[2]), math.sin(pose[2])
    return np.array([c * xi[0] - s * xi[1], s * xi[0] + c * xi[1], xi[2]])


def integrate_gait(spec: RobotSpec, g: GaitParams, cycles: int = 1,
                   steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE, start: Optional[Pose] = None,
                   cycle_period: float = 1.0, velocity_model: str = "exact") -> Trajectory:
    """Integrate the reduced equation of motion along phi_b = phi_c + phi_0.

    Fixed-step RK4 in time; sub-intervals are split at contact switches and
    the contact pattern is evaluated at each sub-interval's midpoint.
    Phases without contact contribute zero body velocity and are recorded.
    A solver failure ends the trajectory early with `failure` set.
    """
    if steps_per_cycle < MIN_STEPS_PER_CYCLE:
        raise ValueError(f"steps_per_cycle must be >= {MIN_STEPS_PER_CYCLE}")
    if cycles < 1:
        raise ValueError("cycles must be >= 1")
    if cycle_period <= 0:
        raise ValueError("cycle_period must be > 0")
    if velocity_model not in VELOCITY_MODELS:
        raise ValueError(f"velocity_model must be one of {VELOCITY_MODELS}")

    omega = TWO_PI / cycle_period
    rate = ShapeVelocity(omega, omega)
    start = start or Pose()
    nodes = cycle_nodes(spec, g, steps_per_cycle)
    no_support = []
    last = [None]

    def body_velocity(phase: float, contact_phase: float) -> np.ndarray:
        p = ShapePoint(phase, phase + g.phi_0)
        try:
            if velocity_model == "exact":
                xi = solve_body_velocity(spec, g, p, rate, contact_phase, guess=last[0])
                last[0] = xi
                return xi.as_array()
            a = local_connection_at(spec, g, p, contact_phase=contact_phase).a
            return a @ np.array([omega, omega])
        except NoSupportError:
            return np.zeros(3)

    state = start.as_array()
    times = [0.0]
    poses = [state.copy()]
    per_cycle = None
    failure = None
    for cycle in range(cycles):
        for a, b in zip(nodes[:-1], nodes[1:]):
            contact_phase = 0.5 * (a + b)
            h = (b - a) / omega
            t0 = cycle * cycle_period + a / omega
            phase0 = cycle * TWO_PI + a
            try:
                xi_mid = body_velocity(phase0 + 0.5 * (b - a), contact_phase)
                if cycle == 0 and _unsupported(spec, g, contact_phase):
                    no_support.append(float(contact_phase))
                k1 = _lifted(state, body_velocity(phase0, contact_phase))
                k2 = _lifted(state + 0.5 * h * k1, xi_mid)
                k3 = _lifted(state + 0.5 * h * k2, xi_mid)
                k4 = _lifted(state + h * k3, body_velocity(phase0 + (b - a), contact_phase))
            except SolverError as e:
                failure = str(e)
                logger.error(f"integration stopped in cycle {cycle + 1}: {failure}")
                break
            state = state + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            times.append(t0 + h)
            poses.append(state.copy())
        if failure is not None:
            break
        if cycle == 0:
            delta = state - start.as_array()
            per_cycle = (float(delta[0]), float(delta[1]), float(delta[2]))

    if no_support:
        logger.warning(f"{spec.name}: no ground contact on {len(no_support)} sub-intervals per cycle")
    return Trajectory(
        times=np.array(times) / cycle_period,
        poses=np.array(poses),
        cycles=cycles,
        cycle_period=cycle_period,
        per_cycle=per_cycle,
        no_support_phases=no_support,
        failure=failure,
    )


def _unsupported(spec: RobotSpec, g: GaitParams, contact_phase: float) -> bool:
    left, right, links = contacts_at(spec, g, contact_phase)
    return not (left.any() or right.any() or links.any())


def speed_blc(traj: Trajectory) -> float:
    """Body lengths travelled per cycle."""
    if traj.per_cycle is None:
        raise ValueError("trajectory does not contain a complete cycle")
    return math.hypot(traj.per_cycle[0], traj.per_cycle[1])


def cycle_displacement(spec: RobotSpec, g: GaitParams, steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE,
                       objective: Optional[str] = None) -> float:
    """Objective of the phase-offset optimizer.

    "forward" is the travel along the body axis per cycle, "blc" the planar
    distance. The default is forward travel for legged chains and BLC for
    sidewinders, which travel sideways.
    """
    if objective is None:
        objective = "blc" if spec.is_sidewinder else "forward"
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    traj = integrate_gait(spec, g, cycles=1, steps_per_cycle=steps_per_cycle)
    if traj.failure is not None:
        raise SolverError(traj.failure)
    if objective == "blc":
        return speed_blc(traj)
    return traj.per_cycle[0]
