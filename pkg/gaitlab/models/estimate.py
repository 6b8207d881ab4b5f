from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np


@dataclass
class TrajectoryDataset:
    """Joint-angle time series. `legs` is keyed by (side, pair) with pair
    1-based, `body` by 1-based joint index; all angles in radians."""
    time: np.ndarray
    legs: Dict[Tuple[str, int], np.ndarray]
    body: Dict[int, np.ndarray] = field(default_factory=dict)
    footfalls: Optional[Dict[Tuple[str, int], List[float]]] = None

    def __post_init__(self):
        self.time = np.asarray(self.time, dtype=float)
        n = len(self.time)
        for key, series in list(self.legs.items()) + list(self.body.items()):
            if len(series) != n:
                raise ValueError(f"series {key} has {len(series)} samples, expected {n}")


@dataclass
class LegFit:
    D: float
    amplitude: float
    phase: float
    period: float
    residual: float


@dataclass
class BodyFit:
    coefficients: Tuple[float, float, float, float, float]  # a0, a1, b1, a2, b2
    phase: float
    amplitude: float
    oscillatory: bool
    residual: float


@dataclass
class GaitEstimate:
    D: float
    Phi_lat: float
    A_theta: float
    period: float
    leg_phases: Dict[str, float]
    phi_bc: Optional[float]
    phi_bc_predicted: float
    residuals: Dict[str, float]

    def to_dict(self) -> dict:
        return {
            "D": self.D,
            "Phi_lat": self.Phi_lat,
            "A_theta_deg": float(np.degrees(self.A_theta)),
            "period": self.period,
            "leg_phases_deg": {k: float(np.degrees(v)) for k, v in self.leg_phases.items()},
            "phi_bc_deg": None if self.phi_bc is None else float(np.degrees(self.phi_bc)),
            "phi_bc_predicted_deg": float(np.degrees(self.phi_bc_predicted)),
            "residuals": self.residuals,
        }
