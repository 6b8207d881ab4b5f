import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..models.pose import Pose
from ..models.robot import Configuration, FrictionModel, PlanarPoseSet, RobotSpec

logger = logging.getLogger(__name__)

REFERENCE_ROBOTS = ("quadruped", "hexapod", "myriapod", "sidewinder")

# Maximum backbone curvature of the sidewinder, per body length.
SIDEWINDER_CURVATURE = 5.6


def make_reference_robot(name: str) -> RobotSpec:
    """Build one of the reference morphologies (BL-normalized)."""
    if name == "quadruped":
        # Trunk of two halves with shoulder and hip girdles near the ends.
        return RobotSpec(
            name="quadruped",
            n_leg_pairs=2,
            n_body_joints=1,
            link_lengths=(0.5, 0.5),
            leg_lengths=(0.15, 0.15),
            leg_attach_offsets=(0.2, -0.2),
            leg_links=(0, 1),
            friction=FrictionModel(kind="anisotropic_coulomb"),
            amplitudes=(math.radians(30.0), math.radians(30.0)),
        )
    if name == "hexapod":
        return RobotSpec(
            name="hexapod",
            n_leg_pairs=3,
            n_body_joints=2,
            link_lengths=(1.0, 1.0, 1.0),
            leg_lengths=(0.6, 0.6, 0.6),
            leg_links=(0, 1, 2),
            friction=FrictionModel(kind="anisotropic_coulomb"),
            amplitudes=(math.radians(10.0), math.radians(10.0)),
        )
    if name == "myriapod":
        # 72 cm chain of eight segments with 12 cm legs.
        return RobotSpec(
            name="myriapod",
            n_leg_pairs=8,
            n_body_joints=7,
            link_lengths=(9.0,) * 8,
            leg_lengths=(12.0,) * 8,
            leg_links=tuple(range(8)),
            friction=FrictionModel(kind="anisotropic_coulomb"),
            amplitudes=(math.radians(12.0), math.radians(17.0)),
        )
    if name == "sidewinder":
        segment = 1.0 / 7.0
        return RobotSpec(
            name="sidewinder",
            n_leg_pairs=0,
            n_body_joints=6,
            link_lengths=(segment,) * 7,
            friction=FrictionModel(kind="isotropic_coulomb"),
            amplitudes=(0.0, SIDEWINDER_CURVATURE * segment),
            mode="sidewinder",
        )
    raise ValueError(f"unknown reference robot {name!r}; expected one of {REFERENCE_ROBOTS}")


def _chain_in_head_frame(spec: RobotSpec, alphas: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Link headings, midpoints and unit directions with the head link's
    front endpoint at the origin. heading_{i+1} = heading_i - alpha_i."""
    lengths = np.asarray(spec.link_lengths)
    headings = -np.concatenate([[0.0], np.cumsum(alphas)])
    direction = np.stack([np.cos(headings), np.sin(headings)], axis=1)
    steps = lengths[:, None] * direction
    fronts = -np.concatenate([np.zeros((1, 2)), np.cumsum(steps, axis=0)[:-1]])
    midpoints = fronts - 0.5 * steps
    return headings, midpoints, direction


def _feet(spec: RobotSpec, theta_left: np.ndarray, theta_right: np.ndarray,
          midpoints: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Foot points, left pairs then right pairs. Positive theta swings a foot
    toward the head; theta = 0 is perpendicular to the carrying link."""
    if spec.n_leg_pairs == 0:
        return np.zeros((0, 2))
    links = np.asarray(spec.leg_links)
    u = direction[links]
    normal = np.stack([-u[:, 1], u[:, 0]], axis=1)
    attach = midpoints[links] + np.asarray(spec.leg_attach_offsets)[:, None] * u
    length = np.asarray(spec.leg_lengths)[:, None]
    left = attach + length * (np.sin(theta_left)[:, None] * u + np.cos(theta_left)[:, None] * normal)
    right = attach + length * (np.sin(theta_right)[:, None] * u - np.cos(theta_right)[:, None] * normal)
    return np.concatenate([left, right])


def body_frame(spec: RobotSpec, headings: np.ndarray, midpoints: np.ndarray) -> Pose:
    """Body frame: mass-weighted centre of the link midpoints, heading equal
    to the mean link heading."""
    masses = np.asarray(spec.link_masses)
    if masses.sum() > 0:
        centre = masses @ midpoints / masses.sum()
    else:
        centre = midpoints.mean(axis=0)
    return Pose(float(centre[0]), float(centre[1]), float(np.mean(headings)))


def contact_geometry(spec: RobotSpec, alphas: np.ndarray, theta_left: np.ndarray,
                     theta_right: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Body-frame candidate contact points with their carrying link headings.

    Returns (feet, link midpoints, link headings); the fast path used by the
    force balance, which needs positions only.
    """
    headings, midpoints, direction = _chain_in_head_frame(spec, alphas)
    feet = _feet(spec, theta_left, theta_right, midpoints, direction)
    frame = body_frame(spec, headings, midpoints).inverse()
    return frame.apply(feet), frame.apply(midpoints), headings + frame.heading


def forward_kinematics(spec: RobotSpec, cfg: Configuration, base: Optional[Pose] = None) -> PlanarPoseSet:
    """Planar poses of links and feet in the body frame.

    With `base`, every point is additionally placed by that rigid motion.
    """
    cfg.check(spec)
    alphas = np.asarray(cfg.body_joint_angles, dtype=float)
    headings, midpoints, direction = _chain_in_head_frame(spec, alphas)
    feet = _feet(spec, np.asarray(cfg.shoulder_angles_left, dtype=float),
                 np.asarray(cfg.shoulder_angles_right, dtype=float), midpoints, direction)

    placement = body_frame(spec, headings, midpoints).inverse()
    if base is not None:
        placement = base.compose(placement)
    midpoints = placement.apply(midpoints)
    feet = placement.apply(feet)
    headings = headings + placement.heading

    n = spec.n_leg_pairs
    poses = PlanarPoseSet(
        link_poses=np.column_stack([midpoints, headings]),
        feet=feet,
        foot_sides=("left",) * n + ("right",) * n,
        foot_pairs=tuple(range(1, n + 1)) * 2,
        foot_contact=np.concatenate([cfg.contact_left, cfg.contact_right]).astype(int),
        foot_links=tuple(spec.leg_links) * 2,
        link_lengths=spec.link_lengths,
        link_contacts=np.asarray(cfg.link_contacts, dtype=int),
    )
    poses.com = center_of_mass(poses, spec)
    return poses


def center_of_mass(poses: PlanarPoseSet, spec: RobotSpec) -> Tuple[float, float]:
    """Mass-weighted mean of link midpoints and (massive) feet."""
    link_masses = np.asarray(spec.link_masses)
    leg_masses = np.tile(np.asarray(spec.leg_masses), 2)
    total = link_masses.sum() + leg_masses.sum()
    if total <= 0:
        raise ValueError("total mass must be > 0")
    weighted = link_masses @ poses.link_poses[:, :2]
    if leg_masses.size:
        weighted = weighted + leg_masses @ poses.feet
    com = weighted / total
    return float(com[0]), float(com[1])


def mirror_configuration(cfg: Configuration) -> Configuration:
    """Reflect a configuration across the backbone axis."""
    return Configuration(
        body_joint_angles=-np.asarray(cfg.body_joint_angles, dtype=float),
        shoulder_angles_left=np.array(cfg.shoulder_angles_right, dtype=float),
        shoulder_angles_right=np.array(cfg.shoulder_angles_left, dtype=float),
        contact_left=np.array(cfg.contact_right),
        contact_right=np.array(cfg.contact_left),
        link_contacts=np.array(cfg.link_contacts),
    )
