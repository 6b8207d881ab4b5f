from dataclasses import dataclass, field
import math
from typing import List, Optional, Tuple

import numpy as np


@dataclass
class Trajectory:
    """World-frame poses sampled along an integrated gait.

    `times` are in units of the nominal cycle period, `poses` rows are
    (x, y, yaw). `per_cycle` is the world-frame change over the first full
    cycle; it is None if integration stopped before completing one.
    """
    times: np.ndarray
    poses: np.ndarray
    cycles: int
    cycle_period: float = 1.0
    per_cycle: Optional[Tuple[float, float, float]] = None
    no_support_phases: List[float] = field(default_factory=list)
    failure: Optional[str] = None

    @property
    def samples(self) -> List[Tuple[float, Tuple[float, float, float]]]:
        return [(float(t), (float(p[0]), float(p[1]), float(p[2]))) for t, p in zip(self.times, self.poses)]

    @property
    def final_pose(self) -> Tuple[float, float, float]:
        return tuple(float(v) for v in self.poses[-1])

    @property
    def speed_blc(self) -> float:
        if self.per_cycle is None:
            return math.nan
        return math.hypot(self.per_cycle[0], self.per_cycle[1])

    @property
    def complete(self) -> bool:
        return self.failure is None


@dataclass
class SweepResult:
    """Surfaces over the (D, Phi_lat) grid, indexed [i_D, j_Phi]. NaN marks
    a failed or skipped cell."""
    robot: str
    D_grid: np.ndarray
    Phi_grid: np.ndarray
    mode: str
    stability: np.ndarray
    blc_straight: np.ndarray
    blc_coordinated: np.ndarray
    phi_0: np.ndarray
    failures: List[dict] = field(default_factory=list)
