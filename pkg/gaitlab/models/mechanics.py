from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class BodyVelocity:
    """Body-frame velocity per unit phase: forward, lateral, yaw."""
    xi_x: float
    xi_y: float
    xi_theta: float

    def as_array(self) -> np.ndarray:
        return np.array([self.xi_x, self.xi_y, self.xi_theta])

    @classmethod
    def from_array(cls, values) -> "BodyVelocity":
        return cls(float(values[0]), float(values[1]), float(values[2]))

    @classmethod
    def zero(cls) -> "BodyVelocity":
        return cls(0.0, 0.0, 0.0)


@dataclass
class LocalConnection:
    """Columnwise local connection at a shape point.

    `a[:, 0]` is the body velocity for a unit contact-phase rate, `a[:, 1]`
    for a unit body-phase rate. When a direction was requested, `directional`
    holds the exactly solved body velocity for that composite rate and
    `linearization_error` its distance from `a @ direction`.
    """
    phi_c: float
    phi_b: float
    a: np.ndarray
    directional: Optional[BodyVelocity] = None
    linearization_error: Optional[float] = None
