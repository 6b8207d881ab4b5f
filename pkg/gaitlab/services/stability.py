import logging
from typing import List, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from ..config import DEFAULT_STABILITY_SAMPLES, MIN_STABILITY_SAMPLES
from ..models.gait import TWO_PI, GaitParams, ShapePoint
from ..models.robot import PlanarPoseSet, RobotSpec
from ..models.stability import StabilityClass
from .gait import configuration_at
from .morphology import forward_kinematics

logger = logging.getLogger(__name__)

HULL_TOLERANCE = 1e-12


def _spans_plane(points: np.ndarray) -> bool:
    if len(points) < 3:
        return False
    return np.linalg.matrix_rank(points[1:] - points[0], tol=1e-12) >= 2


def support_polygon(poses: PlanarPoseSet, legged: bool = True) -> np.ndarray:
    """Counter-clockwise hull vertices of the contact points; empty when
    fewer than three of them are non-collinear."""
    points = poses.contact_points(legged)
    if not _spans_plane(points):
        return np.zeros((0, 2))
    hull = ConvexHull(points)
    return points[hull.vertices]


def _com_supported(points: np.ndarray, com) -> bool:
    if not _spans_plane(points):
        return False
    hull = ConvexHull(points)
    # equations rows are (nx, ny, offset) with outward normals
    distances = hull.equations[:, :2] @ np.asarray(com, dtype=float) + hull.equations[:, 2]
    return bool(np.all(distances <= HULL_TOLERANCE))


def classify(spec: RobotSpec, poses: PlanarPoseSet) -> StabilityClass:
    """Static stability class of one configuration. A CoM on the hull
    boundary counts as supported."""
    if spec.is_sidewinder:
        points = poses.contact_points(legged=False)
        if len(points) == 0:
            return StabilityClass.UNSTABLE
    else:
        contact = np.asarray(poses.foot_contact).astype(bool)
        sides = np.asarray(poses.foot_sides)
        if not contact[sides == "left"].any() or not contact[sides == "right"].any():
            return StabilityClass.UNSTABLE
        points = poses.contact_points(legged=True)
    if _com_supported(points, poses.com):
        return StabilityClass.STATICALLY_STABLE
    return StabilityClass.STATICALLY_UNSTABLE


def phase_classification(spec: RobotSpec, g: GaitParams,
                         samples: int = DEFAULT_STABILITY_SAMPLES) -> Tuple[np.ndarray, List[StabilityClass]]:
    """Classes at half-offset phases over one cycle.

    Legged chains are evaluated with a straight backbone, sidewinders with
    their body wave at the gait's phase offset.
    """
    if samples < MIN_STABILITY_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_STABILITY_SAMPLES}")
    gait = g if spec.is_sidewinder else g.straight()
    phases = TWO_PI * (np.arange(samples) + 0.5) / samples
    classes = []
    for phi in phases:
        cfg = configuration_at(spec, gait, ShapePoint(phi, phi + gait.phi_0))
        classes.append(classify(spec, forward_kinematics(spec, cfg)))
    return phases, classes


def stability_metric(spec: RobotSpec, g: GaitParams, samples: int = DEFAULT_STABILITY_SAMPLES) -> float:
    """Fraction of the cycle spent statically stable; 0 if any sampled phase
    is unstable."""
    _, classes = phase_classification(spec, g, samples)
    metric = metric_from_classes(classes)
    logger.debug(f"{spec.name} D={g.D:.3f} Phi_lat={g.Phi_lat:.3f}: stability {metric:.4f}")
    return metric


def metric_from_classes(classes: List[StabilityClass]) -> float:
    if not classes or StabilityClass.UNSTABLE in classes:
        return 0.0
    return classes.count(StabilityClass.STATICALLY_STABLE) / len(classes)
