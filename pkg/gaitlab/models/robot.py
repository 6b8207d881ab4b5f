from dataclasses import dataclass, field
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..config import DEFAULT_ANISOTROPY, DEFAULT_EPSILON_V, DEFAULT_MU
from ..exceptions import ConfigError

FRICTION_KINDS = ("isotropic_coulomb", "anisotropic_coulomb")
MODES = ("legged", "sidewinder")
SIDES = ("left", "right")


@dataclass(frozen=True)
class FrictionModel:
    kind: str = "anisotropic_coulomb"
    mu: float = DEFAULT_MU
    anisotropy_ratio: float = DEFAULT_ANISOTROPY
    epsilon_v: float = DEFAULT_EPSILON_V

    def __post_init__(self):
        if self.kind not in FRICTION_KINDS:
            raise ConfigError("$.friction.kind", f"expected one of {FRICTION_KINDS}, got {self.kind!r}")
        if not self.mu > 0:
            raise ConfigError("$.friction.mu", "must be > 0")
        if not self.epsilon_v > 0:
            raise ConfigError("$.friction.epsilon_v", "must be > 0")
        if not self.anisotropy_ratio > 0:
            raise ConfigError("$.friction.anisotropy_ratio", "must be > 0")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "mu": self.mu,
            "anisotropy_ratio": self.anisotropy_ratio,
            "epsilon_v": self.epsilon_v,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FrictionModel":
        if not isinstance(data, dict):
            raise ConfigError("$.friction", "must be an object")
        return cls(
            kind=data.get("kind", "anisotropic_coulomb"),
            mu=float(data.get("mu", DEFAULT_MU)),
            anisotropy_ratio=float(data.get("anisotropy_ratio", DEFAULT_ANISOTROPY)),
            epsilon_v=float(data.get("epsilon_v", DEFAULT_EPSILON_V)),
        )


@dataclass(frozen=True)
class RobotSpec:
    """Morphology of a serial chain, in body-length units.

    Link lengths are normalized so the backbone has length 1; leg lengths and
    attachment offsets are scaled by the same factor. `leg_links[j]` is the
    0-based link carrying leg pair j+1 and `leg_attach_offsets[j]` the
    attachment position measured from that link's midpoint, positive toward
    the head. Amplitudes are in radians.
    """
    name: str
    n_leg_pairs: int
    n_body_joints: int
    link_lengths: Tuple[float, ...]
    leg_lengths: Tuple[float, ...] = ()
    leg_attach_offsets: Tuple[float, ...] = ()
    leg_links: Tuple[int, ...] = ()
    link_masses: Tuple[float, ...] = ()
    leg_masses: Tuple[float, ...] = ()
    friction: FrictionModel = field(default_factory=FrictionModel)
    amplitudes: Tuple[float, float] = (0.0, 0.0)
    mode: str = "legged"

    def __post_init__(self):
        n_links = self.n_body_joints + 1
        if self.n_leg_pairs < 0:
            raise ConfigError("$.n_leg_pairs", "must be >= 0")
        if self.n_body_joints < 0:
            raise ConfigError("$.n_body_joints", "must be >= 0")
        if self.mode not in MODES:
            raise ConfigError("$.mode", f"expected one of {MODES}, got {self.mode!r}")
        if self.n_leg_pairs == 0 and self.mode != "sidewinder":
            raise ConfigError("$.mode", "a chain without legs must use mode 'sidewinder'")
        if self.mode == "sidewinder" and self.n_leg_pairs != 0:
            raise ConfigError("$.n_leg_pairs", "sidewinder chains are legless")
        if len(self.link_lengths) != n_links:
            raise ConfigError("$.link_lengths", f"expected {n_links} entries (n_body_joints + 1)")
        if any(not length > 0 for length in self.link_lengths):
            raise ConfigError("$.link_lengths", "lengths must be > 0")

        n = self.n_leg_pairs
        leg_links = (tuple(self.leg_links) or tuple(j * n_links // n for j in range(n))) if n else ()
        leg_masses = tuple(self.leg_masses) or (0.0,) * n
        link_masses = tuple(self.link_masses) or (1.0,) * n_links
        offsets = tuple(self.leg_attach_offsets) or (0.0,) * n
        for key, values in (("leg_lengths", self.leg_lengths), ("leg_attach_offsets", offsets),
                            ("leg_links", leg_links), ("leg_masses", leg_masses)):
            if len(values) != n:
                raise ConfigError(f"$.{key}", f"expected {n} entries (one per leg pair)")
        if len(link_masses) != n_links:
            raise ConfigError("$.link_masses", f"expected {n_links} entries")
        for j, link in enumerate(leg_links):
            if not 0 <= link < n_links:
                raise ConfigError(f"$.leg_links[{j}]", f"link index {link} out of range")
        if any(m < 0 for m in link_masses):
            raise ConfigError("$.link_masses", "masses must be >= 0")
        if any(m < 0 for m in leg_masses):
            raise ConfigError("$.leg_masses", "masses must be >= 0")
        if sum(link_masses) + 2 * sum(leg_masses) <= 0:
            raise ConfigError("$.link_masses", "total mass must be > 0")
        if len(self.amplitudes) != 2:
            raise ConfigError("$.amplitudes", "expected [A_theta, A_alpha]")

        total = float(sum(self.link_lengths))
        object.__setattr__(self, "link_lengths", tuple(float(x) / total for x in self.link_lengths))
        object.__setattr__(self, "leg_lengths", tuple(float(x) / total for x in self.leg_lengths))
        object.__setattr__(self, "leg_attach_offsets", tuple(float(x) / total for x in offsets))
        object.__setattr__(self, "leg_links", tuple(int(x) for x in leg_links))
        object.__setattr__(self, "link_masses", tuple(float(x) for x in link_masses))
        object.__setattr__(self, "leg_masses", tuple(float(x) for x in leg_masses))
        object.__setattr__(self, "amplitudes", (float(self.amplitudes[0]), float(self.amplitudes[1])))

    @property
    def n_links(self) -> int:
        return self.n_body_joints + 1

    @property
    def n_feet(self) -> int:
        return 2 * self.n_leg_pairs

    @property
    def is_sidewinder(self) -> bool:
        return self.mode == "sidewinder"

    @property
    def A_theta(self) -> float:
        return self.amplitudes[0]

    @property
    def A_alpha(self) -> float:
        return self.amplitudes[1]

    def to_dict(self) -> Dict[str, Any]:
        """File representation; angles in degrees."""
        return {
            "name": self.name,
            "n_leg_pairs": self.n_leg_pairs,
            "n_body_joints": self.n_body_joints,
            "link_lengths": list(self.link_lengths),
            "leg_lengths": list(self.leg_lengths),
            "leg_attach_offsets": list(self.leg_attach_offsets),
            "leg_links": list(self.leg_links),
            "link_masses": list(self.link_masses),
            "leg_masses": list(self.leg_masses),
            "friction": self.friction.to_dict(),
            "amplitudes": [math.degrees(self.amplitudes[0]), math.degrees(self.amplitudes[1])],
            "mode": self.mode,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RobotSpec":
        if not isinstance(data, dict):
            raise ConfigError("$", "robot document must be a JSON object")
        for key in ("n_leg_pairs", "n_body_joints", "link_lengths"):
            if key not in data:
                raise ConfigError(f"$.{key}", "missing required field")

        def numbers(key: str, cast=float) -> Tuple:
            values = data.get(key, [])
            if not isinstance(values, list):
                raise ConfigError(f"$.{key}", "must be a list")
            try:
                return tuple(cast(v) for v in values)
            except (TypeError, ValueError):
                raise ConfigError(f"$.{key}", "entries must be numbers")

        amplitudes = numbers("amplitudes") or (0.0, 0.0)
        if len(amplitudes) != 2:
            raise ConfigError("$.amplitudes", "expected [A_theta_deg, A_alpha_deg]")
        try:
            n_leg_pairs = int(data["n_leg_pairs"])
            n_body_joints = int(data["n_body_joints"])
        except (TypeError, ValueError):
            raise ConfigError("$.n_leg_pairs", "counts must be integers")
        return cls(
            name=str(data.get("name", "custom")),
            n_leg_pairs=n_leg_pairs,
            n_body_joints=n_body_joints,
            link_lengths=numbers("link_lengths"),
            leg_lengths=numbers("leg_lengths"),
            leg_attach_offsets=numbers("leg_attach_offsets"),
            leg_links=numbers("leg_links", int),
            link_masses=numbers("link_masses"),
            leg_masses=numbers("leg_masses"),
            friction=FrictionModel.from_dict(data.get("friction", {})),
            amplitudes=(math.radians(amplitudes[0]), math.radians(amplitudes[1])),
            mode=str(data.get("mode", "legged" if n_leg_pairs else "sidewinder")),
        )


@dataclass
class Configuration:
    """Joint angles and contact states of a chain at one instant.

    Leg arrays are indexed by pair (0-based). Sidewinders carry their contact
    states per link in `link_contacts`; legged chains leave it empty.
    """
    body_joint_angles: np.ndarray
    shoulder_angles_left: np.ndarray
    shoulder_angles_right: np.ndarray
    contact_left: np.ndarray
    contact_right: np.ndarray
    link_contacts: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    def check(self, spec: RobotSpec) -> None:
        n = spec.n_leg_pairs
        if len(self.body_joint_angles) != spec.n_body_joints:
            raise ValueError(
                f"expected {spec.n_body_joints} body joint angles, got {len(self.body_joint_angles)}"
            )
        for name in ("shoulder_angles_left", "shoulder_angles_right", "contact_left", "contact_right"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name}: expected {n} entries, got {len(getattr(self, name))}")
        if spec.is_sidewinder and len(self.link_contacts) != spec.n_links:
            raise ValueError(f"link_contacts: expected {spec.n_links} entries")
        for name in ("contact_left", "contact_right", "link_contacts"):
            values = np.asarray(getattr(self, name))
            if values.size and not np.all((values == 0) | (values == 1)):
                raise ValueError(f"{name}: contact states must be 0 or 1")


@dataclass(frozen=True)
class FootPoint:
    x: float
    y: float
    side: str
    pair_index: int
    in_contact: bool


@dataclass
class PlanarPoseSet:
    """Chain geometry in the body frame.

    `link_poses` rows are (x, y, heading) of link midpoints, head first.
    Feet are ordered left pairs 1..N then right pairs 1..N.
    """
    link_poses: np.ndarray
    feet: np.ndarray
    foot_sides: Tuple[str, ...]
    foot_pairs: Tuple[int, ...]
    foot_contact: np.ndarray
    foot_links: Tuple[int, ...]
    link_lengths: Tuple[float, ...]
    link_contacts: np.ndarray
    com: Tuple[float, float] = (0.0, 0.0)

    @property
    def foot_points(self) -> List[FootPoint]:
        return [
            FootPoint(float(p[0]), float(p[1]), side, pair, bool(c))
            for p, side, pair, c in zip(self.feet, self.foot_sides, self.foot_pairs, self.foot_contact)
        ]

    def joint_endpoints(self) -> Tuple[np.ndarray, np.ndarray]:
        """Front and rear endpoints of every link."""
        half = 0.5 * np.asarray(self.link_lengths)[:, None]
        direction = np.stack([np.cos(self.link_poses[:, 2]), np.sin(self.link_poses[:, 2])], axis=1)
        return self.link_poses[:, :2] + half * direction, self.link_poses[:, :2] - half * direction

    def closure_residual(self) -> float:
        front, rear = self.joint_endpoints()
        if len(front) < 2:
            return 0.0
        return float(np.max(np.linalg.norm(rear[:-1] - front[1:], axis=1)))

    def contact_points(self, legged: bool) -> Optional[np.ndarray]:
        if legged:
            return self.feet[self.foot_contact.astype(bool)]
        return self.link_poses[self.link_contacts.astype(bool), :2]
