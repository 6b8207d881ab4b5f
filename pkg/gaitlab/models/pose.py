from dataclasses import dataclass
import math

import numpy as np


@dataclass(frozen=True)
class Pose:
    """Planar rigid pose (x, y, heading), an element of SE(2)."""
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0

    @property
    def rotation(self) -> np.ndarray:
        c, s = math.cos(self.heading), math.sin(self.heading)
        return np.array([[c, -s], [s, c]])

    def compose(self, other: "Pose") -> "Pose":
        """Group product self * other (other expressed in self's frame)."""
        c, s = math.cos(self.heading), math.sin(self.heading)
        return Pose(
            self.x + c * other.x - s * other.y,
            self.y + s * other.x + c * other.y,
            self.heading + other.heading,
        )

    def inverse(self) -> "Pose":
        c, s = math.cos(self.heading), math.sin(self.heading)
        return Pose(-(c * self.x + s * self.y), s * self.x - c * self.y, -self.heading)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map (..., 2) body-frame points into this pose's parent frame."""
        points = np.asarray(points, dtype=float)
        return points @ self.rotation.T + np.array([self.x, self.y])

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.heading])
