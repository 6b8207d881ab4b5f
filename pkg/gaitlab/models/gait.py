from dataclasses import dataclass, replace
import math
from typing import Any, Dict, Optional

from ..config import D_MIN
from ..exceptions import ConfigError

TWO_PI = 2.0 * math.pi
UNDULATION_MODES = ("fixed_straight", "coordinated")


@dataclass(frozen=True)
class GaitParams:
    """Extended Hildebrand gait parameters.

    Phi_lat and Phi_lat_b are fractions of a cycle. `mirrored` swaps the
    roles of the left and right sides and negates the body wave.
    """
    D: float
    Phi_lat: float
    A_theta: float
    A_alpha: float
    phi_0: float = 0.0
    undulation: str = "coordinated"
    Phi_lat_b: Optional[float] = None
    mirrored: bool = False

    def __post_init__(self):
        if not (0.0 < self.D <= 1.0):
            raise ConfigError("$.gait.D", f"duty factor must lie in (0, 1], got {self.D}")
        if self.D < D_MIN:
            raise ConfigError("$.gait.D", f"duty factor below {D_MIN} is not supported")
        if not (0.0 <= self.Phi_lat < 1.0):
            raise ConfigError("$.gait.Phi_lat", f"lateral phase lag must lie in [0, 1), got {self.Phi_lat}")
        if self.undulation not in UNDULATION_MODES:
            raise ConfigError("$.gait.undulation", f"expected one of {UNDULATION_MODES}")
        if self.Phi_lat_b is None:
            object.__setattr__(self, "Phi_lat_b", self.Phi_lat)
        object.__setattr__(self, "phi_0", self.phi_0 % TWO_PI)

    @property
    def effective_A_alpha(self) -> float:
        return 0.0 if self.undulation == "fixed_straight" else self.A_alpha

    def with_phi_0(self, phi_0: float) -> "GaitParams":
        return replace(self, phi_0=phi_0 % TWO_PI)

    def straight(self) -> "GaitParams":
        return replace(self, undulation="fixed_straight")

    def coordinated(self) -> "GaitParams":
        return replace(self, undulation="coordinated")

    def mirror(self) -> "GaitParams":
        return replace(self, mirrored=not self.mirrored)

    @classmethod
    def for_robot(cls, spec, D: float, Phi_lat: float, **kwargs) -> "GaitParams":
        """Gait with the robot's reference amplitudes."""
        kwargs.setdefault("A_theta", spec.A_theta)
        kwargs.setdefault("A_alpha", spec.A_alpha)
        return cls(D=D, Phi_lat=Phi_lat, **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "D": self.D,
            "Phi_lat": self.Phi_lat,
            "A_theta_deg": math.degrees(self.A_theta),
            "A_alpha_deg": math.degrees(self.A_alpha),
            "phi_0_deg": math.degrees(self.phi_0),
            "undulation": self.undulation,
            "Phi_lat_b": self.Phi_lat_b,
            "mirrored": self.mirrored,
        }


@dataclass(frozen=True)
class ShapePoint:
    """Reduced shape (contact phase, body phase) on the 2-torus."""
    phi_c: float
    phi_b: float

    def __post_init__(self):
        object.__setattr__(self, "phi_c", self.phi_c % TWO_PI)
        object.__setattr__(self, "phi_b", self.phi_b % TWO_PI)


@dataclass(frozen=True)
class ShapeVelocity:
    d_phi_c: float
    d_phi_b: float

    @property
    def norm(self) -> float:
        return math.hypot(self.d_phi_c, self.d_phi_b)

    def scaled(self, k: float) -> "ShapeVelocity":
        return ShapeVelocity(k * self.d_phi_c, k * self.d_phi_b)


@dataclass(frozen=True)
class GaitPath:
    """Linear (1,1)-winding gait path phi_b = phi_c + phi_0 on the torus."""
    phi_0: float
    winding: tuple = (1, 1)

    def phi_b(self, phi_c):
        return (phi_c + self.phi_0) % TWO_PI
