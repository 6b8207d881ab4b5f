import logging
import math
from typing import List, Tuple

import numpy as np

from ..models.gait import TWO_PI, GaitParams, ShapePoint
from ..models.robot import Configuration, RobotSpec

logger = logging.getLogger(__name__)

SIDES = ("left", "right")


def _check_pair(pair: int, n_pairs: int) -> None:
    if not 1 <= pair <= n_pairs:
        raise ValueError(f"leg/link index {pair} out of range 1..{n_pairs}")


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _leg_shift(g: GaitParams, pair, side: str):
    """Phase added to phi_c for a leg relative to left leg 1."""
    if g.mirrored:
        side = "right" if side == "left" else "left"
    shift = TWO_PI * (np.asarray(pair) - 1) * g.Phi_lat
    return shift + math.pi if side == "right" else shift


def stance(phase, D: float):
    """Reference contact state: 1 iff mod(phase, 2pi) < 2pi D."""
    return (np.mod(phase, TWO_PI) < TWO_PI * D).astype(int)


def shoulder_waveform(phase, D: float, amplitude: float):
    """Piecewise cosine of the reference leg: +A at touch-down, -A at lift-off."""
    phase = np.mod(phase, TWO_PI)
    if D >= 1.0:
        return amplitude * np.cos(phase / 2.0)
    in_stance = phase < TWO_PI * D
    stance_branch = amplitude * np.cos(phase / (2.0 * D))
    swing_branch = -amplitude * np.cos((phase - TWO_PI * D) / (2.0 * (1.0 - D)))
    return np.where(in_stance, stance_branch, swing_branch)


def contact_state(g: GaitParams, n_pairs: int, phi_c: float, pair: int, side: str) -> int:
    """Stance (1) or swing (0) of leg `pair` (1-based) on `side`."""
    _check_pair(pair, n_pairs)
    _check_side(side)
    return int(stance(phi_c + _leg_shift(g, pair, side), g.D))


def shoulder_angle(g: GaitParams, n_pairs: int, phi_c: float, pair: int, side: str) -> float:
    """Anterior/posterior excursion angle of a leg, in radians."""
    _check_pair(pair, n_pairs)
    _check_side(side)
    if g.D >= 1.0:
        logger.warning("degenerate duty factor D=1: stance branch used over the whole cycle")
    return float(shoulder_waveform(phi_c + _leg_shift(g, pair, side), g.D, g.A_theta))


def body_bend(g: GaitParams, phi_b: float, joint: int, n_joints: int = None) -> float:
    """Body joint angle of the travelling wave, joint index 1-based."""
    if joint < 1 or (n_joints is not None and joint > n_joints):
        raise ValueError(f"joint index {joint} out of range")
    sign = -1.0 if g.mirrored else 1.0
    return sign * g.effective_A_alpha * math.cos(phi_b - TWO_PI * (joint - 1) * g.Phi_lat_b)


def sidewinder_contact(spec: RobotSpec, g: GaitParams, phi_c: float, link: int) -> int:
    """Contact of link `link` (1-based): the left-leg rule applied per link."""
    if not spec.is_sidewinder:
        raise ValueError("sidewinder_contact called on a legged robot")
    _check_pair(link, spec.n_links)
    return int(stance(phi_c + TWO_PI * (link - 1) * g.Phi_lat, g.D))


def _body_angles(spec: RobotSpec, g: GaitParams, phi_b: float) -> np.ndarray:
    joints = np.arange(spec.n_body_joints)
    sign = -1.0 if g.mirrored else 1.0
    return sign * g.effective_A_alpha * np.cos(phi_b - TWO_PI * joints * g.Phi_lat_b)


def joint_angles(spec: RobotSpec, g: GaitParams, phi_c: float, phi_b: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(alpha, theta_left, theta_right) at a shape point."""
    alphas = _body_angles(spec, g, phi_b)
    pairs = np.arange(1, spec.n_leg_pairs + 1)
    if spec.is_sidewinder or spec.n_leg_pairs == 0:
        empty = np.zeros(0)
        return alphas, empty, empty
    theta_left = shoulder_waveform(phi_c + _leg_shift(g, pairs, "left"), g.D, g.A_theta)
    theta_right = shoulder_waveform(phi_c + _leg_shift(g, pairs, "right"), g.D, g.A_theta)
    return alphas, theta_left, theta_right


def contacts_at(spec: RobotSpec, g: GaitParams, phi_c: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(contact_left, contact_right, link_contacts) at a contact phase."""
    if spec.is_sidewinder:
        links = np.arange(spec.n_links)
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int), stance(phi_c + TWO_PI * links * g.Phi_lat, g.D)
    pairs = np.arange(1, spec.n_leg_pairs + 1)
    left = stance(phi_c + _leg_shift(g, pairs, "left"), g.D)
    right = stance(phi_c + _leg_shift(g, pairs, "right"), g.D)
    return left, right, np.zeros(0, dtype=int)


def configuration_at(spec: RobotSpec, g: GaitParams, p: ShapePoint) -> Configuration:
    """Contacts and shoulder angles from phi_c, body bends from phi_b."""
    alphas, theta_left, theta_right = joint_angles(spec, g, p.phi_c, p.phi_b)
    left, right, links = contacts_at(spec, g, p.phi_c)
    return Configuration(
        body_joint_angles=alphas,
        shoulder_angles_left=theta_left,
        shoulder_angles_right=theta_right,
        contact_left=left,
        contact_right=right,
        link_contacts=links,
    )


def hildebrand_region(D: float, Phi_lat: float) -> Tuple[str, str]:
    """Region of the Hildebrand plot: (walk|run|boundary, LS|DS|boundary)."""
    if D > 0.5:
        kind = "walk"
    elif D < 0.5:
        kind = "run"
    else:
        kind = "boundary"
    if Phi_lat < 0.5:
        sequence = "LS"
    elif Phi_lat > 0.5:
        sequence = "DS"
    else:
        sequence = "boundary"
    return kind, sequence


def leg_label(pair: int, side: str, n_pairs: int) -> str:
    """FL/FR/HL/HR for quadrupeds, L1/R1... otherwise."""
    letter = "L" if side == "left" else "R"
    if n_pairs == 2:
        return ("F" if pair == 1 else "H") + letter
    return f"{letter}{pair}"


def row_labels(spec: RobotSpec) -> List[str]:
    if spec.is_sidewinder:
        return [f"S{i}" for i in range(1, spec.n_links + 1)]
    n = spec.n_leg_pairs
    return [leg_label(i, side, n) for side in SIDES for i in range(1, n + 1)]


def contact_diagram(spec: RobotSpec, g: GaitParams, samples: int = 360) -> Tuple[np.ndarray, np.ndarray]:
    """0/1 stance table, rows as `row_labels`, columns at half-offset phases."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    phases = TWO_PI * (np.arange(samples) + 0.5) / samples
    if spec.is_sidewinder:
        links = np.arange(spec.n_links)[:, None]
        return phases, stance(phases[None, :] + TWO_PI * links * g.Phi_lat, g.D)
    pairs = np.arange(1, spec.n_leg_pairs + 1)[:, None]
    left = stance(phases[None, :] + _leg_shift(g, pairs, "left"), g.D)
    right = stance(phases[None, :] + _leg_shift(g, pairs, "right"), g.D)
    return phases, np.vstack([left, right])


def switch_phases(spec: RobotSpec, g: GaitParams) -> np.ndarray:
    """Sorted phases in [0, 2pi) at which any contact state changes."""
    if g.D >= 1.0:
        return np.zeros(0)
    if spec.is_sidewinder:
        shifts = TWO_PI * np.arange(spec.n_links) * g.Phi_lat
    else:
        pairs = np.arange(1, spec.n_leg_pairs + 1)
        shifts = np.concatenate([_leg_shift(g, pairs, "left"), _leg_shift(g, pairs, "right")])
    events = np.concatenate([-shifts, TWO_PI * g.D - shifts])
    return np.unique(np.round(np.mod(events, TWO_PI), 12) % TWO_PI)
