from dataclasses import asdict, dataclass, field
import math
from typing import Any, Dict, List, Optional, Union

from ..config import (D_MIN, DEFAULT_GRID_RESOLUTION, DEFAULT_PHASE_SCAN, DEFAULT_STABILITY_SAMPLES,
                      DEFAULT_STEPS_PER_CYCLE, MIN_GRID_RESOLUTION, MIN_STABILITY_SAMPLES,
                      MIN_STEPS_PER_CYCLE, OUTPUT_DIR)
from ..exceptions import ConfigError
from .gait import UNDULATION_MODES

OUTPUT_FORMATS = ("csv", "json", "svg")
SWEEP_MODES = ("straight", "coordinated", "both")


def _number(data: Dict[str, Any], key: str, path: str, default=None, cast=float):
    value = data.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool):
        raise ConfigError(f"{path}.{key}", "must be a number")
    try:
        value = cast(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{path}.{key}", "must be a number")
    if cast is float and not math.isfinite(value):
        raise ConfigError(f"{path}.{key}", "must be finite")
    return value


def _object(data: Dict[str, Any], key: str) -> Dict[str, Any]:
    value = data.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError(f"$.{key}", "must be an object")
    return value


@dataclass
class GaitSettings:
    """Gait block of a run; angles in degrees as in the files."""
    D: float = 0.5
    Phi_lat: float = 0.5
    phi_0_deg: float = 0.0
    A_theta_deg: Optional[float] = None
    A_alpha_deg: Optional[float] = None
    undulation: str = "coordinated"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GaitSettings":
        settings = cls(
            D=_number(data, "D", "$.gait", 0.5),
            Phi_lat=_number(data, "Phi_lat", "$.gait", 0.5),
            phi_0_deg=_number(data, "phi_0_deg", "$.gait", 0.0),
            A_theta_deg=_number(data, "A_theta_deg", "$.gait"),
            A_alpha_deg=_number(data, "A_alpha_deg", "$.gait"),
            undulation=str(data.get("undulation", "coordinated")),
        )
        if not (D_MIN <= settings.D <= 1.0):
            raise ConfigError("$.gait.D", f"must lie in [{D_MIN}, 1]")
        if not (0.0 <= settings.Phi_lat < 1.0):
            raise ConfigError("$.gait.Phi_lat", "must lie in [0, 1)")
        if settings.undulation not in UNDULATION_MODES:
            raise ConfigError("$.gait.undulation", f"expected one of {UNDULATION_MODES}")
        return settings


@dataclass
class Numerics:
    steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE
    cycles: int = 1
    grid_resolution: int = DEFAULT_GRID_RESOLUTION
    stability_samples: int = DEFAULT_STABILITY_SAMPLES
    phase_scan: int = DEFAULT_PHASE_SCAN

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Numerics":
        numerics = cls(**{
            key: _number(data, key, "$.numerics", default, int)
            for key, default in asdict(cls()).items()
        })
        minimums = {
            "steps_per_cycle": MIN_STEPS_PER_CYCLE,
            "cycles": 1,
            "grid_resolution": MIN_GRID_RESOLUTION,
            "stability_samples": MIN_STABILITY_SAMPLES,
            "phase_scan": 3,
        }
        for key, minimum in minimums.items():
            if getattr(numerics, key) < minimum:
                raise ConfigError(f"$.numerics.{key}", f"must be >= {minimum}")
        return numerics


@dataclass
class SweepGrid:
    D_grid: List[float] = field(default_factory=list)
    Phi_grid: List[float] = field(default_factory=list)
    mode: str = "both"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepGrid":
        grid = cls(mode=str(data.get("mode", "both")))
        if grid.mode not in SWEEP_MODES:
            raise ConfigError("$.sweep.mode", f"expected one of {SWEEP_MODES}")
        for key in ("D_grid", "Phi_grid"):
            values = data.get(key, [])
            if not isinstance(values, list):
                raise ConfigError(f"$.sweep.{key}", "must be a list")
            try:
                setattr(grid, key, [float(v) for v in values])
            except (TypeError, ValueError):
                raise ConfigError(f"$.sweep.{key}", "entries must be numbers")
        for i, D in enumerate(grid.D_grid):
            if not (D_MIN <= D <= 1.0):
                raise ConfigError(f"$.sweep.D_grid[{i}]", f"must lie in [{D_MIN}, 1]")
        for i, Phi in enumerate(grid.Phi_grid):
            if not (0.0 <= Phi < 1.0):
                raise ConfigError(f"$.sweep.Phi_grid[{i}]", "must lie in [0, 1)")
        return grid

    def check(self) -> None:
        if not self.D_grid:
            raise ConfigError("$.sweep.D_grid", "sweep grid is empty")
        if not self.Phi_grid:
            raise ConfigError("$.sweep.Phi_grid", "sweep grid is empty")


@dataclass
class RunConfig:
    """Everything one CLI run needs. `robot` is a reference name, a path to
    a robot JSON file, or an inline robot object."""
    robot: Union[str, Dict[str, Any]] = "hexapod"
    gait: GaitSettings = field(default_factory=GaitSettings)
    numerics: Numerics = field(default_factory=Numerics)
    sweep: SweepGrid = field(default_factory=SweepGrid)
    output_dir: str = str(OUTPUT_DIR)
    formats: List[str] = field(default_factory=lambda: list(OUTPUT_FORMATS))
    workers: Optional[int] = None
    optimize: bool = False
    data: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("$", "run configuration must be a JSON object")
        robot = data.get("robot", "hexapod")
        if not isinstance(robot, (str, dict)):
            raise ConfigError("$.robot", "must be a reference name, a file path or an object")
        formats = data.get("formats", list(OUTPUT_FORMATS))
        if not isinstance(formats, list) or any(f not in OUTPUT_FORMATS for f in formats):
            raise ConfigError("$.formats", f"expected a list drawn from {OUTPUT_FORMATS}")
        workers = _number(data, "workers", "$", None, int)
        if workers is not None and workers < 1:
            raise ConfigError("$.workers", "must be >= 1")
        data_path = data.get("data")
        if data_path is not None and not isinstance(data_path, str):
            raise ConfigError("$.data", "must be a file path")
        return cls(
            robot=robot,
            gait=GaitSettings.from_dict(_object(data, "gait")),
            numerics=Numerics.from_dict(_object(data, "numerics")),
            sweep=SweepGrid.from_dict(_object(data, "sweep")),
            output_dir=str(data.get("output_dir", OUTPUT_DIR)),
            formats=list(formats),
            workers=workers,
            optimize=bool(data.get("optimize", False)),
            data=data_path,
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
