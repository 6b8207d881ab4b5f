from dataclasses import dataclass, field
from typing import List

import numpy as np


@dataclass
class HeightField:
    """Curl of the local connection sampled on an R x R torus grid.

    Grid nodes sit at half-cell offsets: phi_k = 2*pi*(k + 0.5)/R on both
    axes. Arrays are indexed [i_c, j_b, ...]; `values[..., r]` is the height
    function of body-velocity row r (x, y, theta) and `connection[..., r, k]`
    the sampled connection entry A_rk.
    """
    resolution: int
    values: np.ndarray
    connection: np.ndarray

    @property
    def phases(self) -> np.ndarray:
        return 2.0 * np.pi * (np.arange(self.resolution) + 0.5) / self.resolution

    @property
    def cell(self) -> float:
        return 2.0 * np.pi / self.resolution


@dataclass
class PhaseOffsetResult:
    """Optimized body-leg phase offset. `failed_offsets` lists the phi_0
    values whose simulation did not complete; they were scored as -inf."""
    phi_0: float
    displacement: float
    objective: str
    failed_offsets: List[float] = field(default_factory=list)
