"""
Data models for gaitlab
"""
from .pose import Pose
from .robot import Configuration, FootPoint, FrictionModel, PlanarPoseSet, RobotSpec
from .gait import GaitParams, GaitPath, ShapePoint, ShapeVelocity
from .mechanics import BodyVelocity, LocalConnection
from .field import HeightField, PhaseOffsetResult
from .trajectory import SweepResult, Trajectory
from .stability import StabilityClass
from .estimate import BodyFit, GaitEstimate, LegFit, TrajectoryDataset
from .run_config import GaitSettings, Numerics, RunConfig, SweepGrid
from .manifest import Manifest

__all__ = [
    "Pose",
    "Configuration",
    "FootPoint",
    "FrictionModel",
    "PlanarPoseSet",
    "RobotSpec",
    "GaitParams",
    "GaitPath",
    "ShapePoint",
    "ShapeVelocity",
    "BodyVelocity",
    "LocalConnection",
    "HeightField",
    "PhaseOffsetResult",
    "SweepResult",
    "Trajectory",
    "StabilityClass",
    "BodyFit",
    "GaitEstimate",
    "LegFit",
    "TrajectoryDataset",
    "GaitSettings",
    "Numerics",
    "RunConfig",
    "SweepGrid",
    "Manifest",
]
