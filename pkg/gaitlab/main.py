import argparse
import hashlib
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import matplotlib
import numpy as np
import pandas as pd
import scipy

from . import __version__
from .components.contact_diagram import render_contact_diagram
from .components.heatmap import render_heatmap, render_sweep_row
from .components.height_field import render_height_field
from .components.trajectory_plot import render_trajectory
from .config import APP_NAME, LOG_LEVEL
from .exceptions import ConfigError, GaitlabError
from .models.gait import GaitParams, GaitPath
from .models.manifest import Manifest
from .models.robot import RobotSpec
from .models.run_config import OUTPUT_FORMATS, SWEEP_MODES, RunConfig
from .models.stability import StabilityClass
from .services.analysis import estimate_gait
from .services.contact_mechanics import connection_table
from .services.file_service import FileService
from .services.gait import contact_diagram, hildebrand_region, joint_angles, row_labels, switch_phases
from .services.geomech import (compute_height_field, line_integral, optimize_phase_offset,
                               phase_lag_from_offset, phase_relation_prediction, stokes_displacement)
from .services.simulate import cycle_displacement, integrate_gait
from .services.stability import metric_from_classes, phase_classification
from .services.sweep import sweep

logger = logging.getLogger(__name__)

COMMANDS = ("prescribe", "connection", "heightfield", "simulate", "optimize", "stability", "sweep", "estimate")
ROW_NAMES = ("x", "y", "theta")


class Outputs:
    """Writes the artifacts of one run and records them in the manifest."""

    def __init__(self, directory: Path, formats: List[str], manifest: Manifest):
        self.directory = directory
        self.formats = set(formats)
        self.manifest = manifest

    def csv(self, name: str, frame: pd.DataFrame) -> None:
        if "csv" in self.formats:
            self.manifest.record(name, FileService.write_csv(frame, self.directory / name))

    def json(self, name: str, data: Any) -> None:
        if "json" in self.formats:
            self.manifest.record(name, FileService.write_json(_clean(data), self.directory / name))

    def svg(self, name: str, figure) -> None:
        if "svg" in self.formats:
            self.manifest.record(name, FileService.write_svg(figure, self.directory / name))

    def close(self) -> None:
        FileService.write_json(_clean(self.manifest.to_dict()), self.directory / "manifest.json")


def _clean(value: Any) -> Any:
    """JSON-safe copy: numpy scalars to Python, NaN to null."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        return None if not math.isfinite(value) else float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def parse_grid(text: str) -> List[float]:
    """`start:step:stop` (stop included within half a step) or a comma list."""
    try:
        if ":" not in text:
            return [float(v) for v in text.split(",") if v.strip()]
        start, step, stop = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError("$.sweep", f"cannot parse grid {text!r}")
    if not step > 0:
        raise ConfigError("$.sweep", f"grid step must be > 0 in {text!r}")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return [round(start + k * step, 12) for k in range(max(count, 0))]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="run configuration JSON")
    parser.add_argument("--robot", help="reference robot name or robot JSON path")
    parser.add_argument("--output", help="output directory")
    parser.add_argument("--formats", help=f"comma list drawn from {','.join(OUTPUT_FORMATS)}")
    parser.add_argument("--workers", type=int, help="worker processes (overrides GAITLAB_WORKERS)")
    parser.add_argument("--log-level", default=None, help="logging level")


def _add_gait(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--duty", "--D", dest="D", type=float, help="duty factor D")
    parser.add_argument("--phaselag", "--philat", dest="Phi_lat", type=float, help="lateral phase lag")
    parser.add_argument("--phi0", type=float, help="body-leg phase offset (deg)")
    parser.add_argument("--a-theta", type=float, help="shoulder amplitude (deg)")
    parser.add_argument("--a-alpha", type=float, help="body amplitude (deg)")
    parser.add_argument("--undulation", choices=("coordinated", "fixed_straight"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=APP_NAME, description="Hildebrand gaits on legged and limbless chains")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("prescribe", "connection", "heightfield", "simulate", "optimize", "stability"):
        p = sub.add_parser(name)
        _add_common(p)
        _add_gait(p)
        p.add_argument("--steps", type=int, help="integration steps per cycle")
        p.add_argument("--resolution", type=int, help="torus grid resolution")
        p.add_argument("--samples", type=int, help="stability samples per cycle")
        p.add_argument("--scan", type=int, help="phi_0 scan points")
        if name == "simulate":
            p.add_argument("--cycles", type=int)
            p.add_argument("--optimize", action="store_true", help="optimize phi_0 before simulating")

    p = sub.add_parser("sweep")
    _add_common(p)
    p.add_argument("--D", dest="D_grid", help="duty factor grid, start:step:stop")
    p.add_argument("--philat", dest="Phi_grid", help="lateral phase lag grid, start:step:stop")
    p.add_argument("--mode", choices=SWEEP_MODES)
    p.add_argument("--steps", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--scan", type=int)

    p = sub.add_parser("estimate")
    _add_common(p)
    p.add_argument("--data", help="joint-angle CSV")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    data: Dict[str, Any] = FileService.load_json(args.config) if args.config else {}
    if not isinstance(data, dict):
        raise ConfigError("$", "run configuration must be a JSON object")
    sections = {}
    for key in ("gait", "numerics", "sweep"):
        if not isinstance(data.get(key, {}), dict):
            raise ConfigError(f"$.{key}", "must be an object")
        sections[key] = dict(data.get(key, {}))
    gait, numerics, grid = sections["gait"], sections["numerics"], sections["sweep"]

    def put(target: Dict[str, Any], key: str, value: Any) -> None:
        if value is not None:
            target[key] = value

    put(data, "robot", args.robot)
    put(data, "output_dir", args.output)
    put(data, "workers", args.workers)
    if args.formats:
        data["formats"] = [f.strip() for f in args.formats.split(",") if f.strip()]
    put(gait, "D", getattr(args, "D", None))
    put(gait, "Phi_lat", getattr(args, "Phi_lat", None))
    put(gait, "phi_0_deg", getattr(args, "phi0", None))
    put(gait, "A_theta_deg", getattr(args, "a_theta", None))
    put(gait, "A_alpha_deg", getattr(args, "a_alpha", None))
    put(gait, "undulation", getattr(args, "undulation", None))
    put(numerics, "steps_per_cycle", getattr(args, "steps", None))
    put(numerics, "grid_resolution", getattr(args, "resolution", None))
    put(numerics, "stability_samples", getattr(args, "samples", None))
    put(numerics, "phase_scan", getattr(args, "scan", None))
    put(numerics, "cycles", getattr(args, "cycles", None))
    if getattr(args, "D_grid", None) is not None:
        grid["D_grid"] = parse_grid(args.D_grid)
    if getattr(args, "Phi_grid", None) is not None:
        grid["Phi_grid"] = parse_grid(args.Phi_grid)
    put(grid, "mode", getattr(args, "mode", None))
    if getattr(args, "optimize", False):
        data["optimize"] = True
    put(data, "data", getattr(args, "data", None))
    data.update(gait=gait, numerics=numerics, sweep=grid)
    return RunConfig.from_dict(data)


def gait_for(spec: RobotSpec, config: RunConfig) -> GaitParams:
    s = config.gait
    overrides = {}
    if s.A_theta_deg is not None:
        overrides["A_theta"] = math.radians(s.A_theta_deg)
    if s.A_alpha_deg is not None:
        overrides["A_alpha"] = math.radians(s.A_alpha_deg)
    return GaitParams.for_robot(spec, s.D, s.Phi_lat, phi_0=math.radians(s.phi_0_deg),
                                undulation=s.undulation, **overrides)


def _grid_frame(phases: np.ndarray, values: np.ndarray, columns: List[str]) -> pd.DataFrame:
    c, b = np.meshgrid(np.degrees(phases), np.degrees(phases), indexing="ij")
    frame = pd.DataFrame({"phi_c_deg": c.ravel(), "phi_b_deg": b.ravel()})
    flat = values.reshape(len(phases) ** 2, -1)
    for k, column in enumerate(columns):
        frame[column] = flat[:, k]
    return frame


def _prescribe(spec, g, config, out: Outputs) -> int:
    phases, table = contact_diagram(spec, g, samples=360)
    labels = row_labels(spec)
    diagram = pd.DataFrame(table.astype(int), columns=[f"{d:g}" for d in np.degrees(phases)])
    diagram.insert(0, "leg", labels)
    frame = pd.DataFrame({"phase_deg": np.degrees(phases)})
    angles = [joint_angles(spec, g, phi, phi + g.phi_0) for phi in phases]
    if not spec.is_sidewinder:
        n = spec.n_leg_pairs
        for j in range(n):
            frame[f"theta_{labels[j]}_deg"] = [math.degrees(a[1][j]) for a in angles]
            frame[f"theta_{labels[n + j]}_deg"] = [math.degrees(a[2][j]) for a in angles]
    for i in range(spec.n_body_joints):
        frame[f"alpha_{i + 1}_deg"] = [math.degrees(a[0][i]) for a in angles]
    kind, sequence = hildebrand_region(g.D, g.Phi_lat)
    out.csv("contact_diagram.csv", diagram)
    out.csv("prescription.csv", frame)
    out.json("prescription.json", {
        "robot": spec.to_dict(),
        "gait": g.to_dict(),
        "region": {"kind": kind, "sequence": sequence},
        "switch_phases_deg": np.degrees(switch_phases(spec, g)),
    })
    out.svg("contact_diagram.svg", render_contact_diagram(phases, table, labels,
                                                          f"{spec.name} D={g.D:g} Phi_lat={g.Phi_lat:g}"))
    return 0


def _connection(spec, g, config, out: Outputs) -> int:
    phases, table, failures = connection_table(spec, g, config.numerics.grid_resolution, config.workers)
    columns = [f"A_{row}_{col}" for row in ROW_NAMES for col in ("c", "b")]
    out.csv("connection.csv", _grid_frame(phases, table, columns))
    out.manifest.failures.extend({"phi_c": c, "phi_b": b} for c, b in failures)
    return 0


def _heightfield(spec, g, config, out: Outputs) -> int:
    h = compute_height_field(spec, g, config.numerics.grid_resolution, config.workers)
    path = GaitPath(g.phi_0)
    out.csv("height_field.csv", _grid_frame(h.phases, h.values, [f"h_{row}" for row in ROW_NAMES]))
    out.json("height_field.json", {
        "resolution": h.resolution,
        "phi_0_deg": math.degrees(g.phi_0),
        "stokes": dict(zip(ROW_NAMES, stokes_displacement(h, path))),
        "line_integral": dict(zip(ROW_NAMES, line_integral(h, path))),
    })
    out.svg("height_field.svg", render_height_field(h, path))
    return 0


def _simulate(spec, g, config, out: Outputs) -> int:
    n = config.numerics
    if config.optimize:
        best = optimize_phase_offset(spec, g, scan=n.phase_scan, steps_per_cycle=n.steps_per_cycle,
                                     workers=config.workers)
        g = g.with_phi_0(best.phi_0)
    traj = integrate_gait(spec, g, n.cycles, n.steps_per_cycle)
    out.csv("trajectory.csv", pd.DataFrame({
        "t_cycles": traj.times,
        "x_bl": traj.poses[:, 0],
        "y_bl": traj.poses[:, 1],
        "yaw_deg": np.degrees(traj.poses[:, 2]),
    }))
    per_cycle = None
    if traj.per_cycle is not None:
        dx, dy, dtheta = traj.per_cycle
        per_cycle = {"dx_bl": dx, "dy_bl": dy, "dtheta_deg": math.degrees(dtheta)}
    out.json("summary.json", {
        "robot": spec.name,
        "gait": g.to_dict(),
        "per_cycle": per_cycle,
        "speed_blc": traj.speed_blc,
        "no_support_phases_deg": np.degrees(traj.no_support_phases),
        "failure": traj.failure,
    })
    out.svg("trajectory.svg", render_trajectory(traj, f"{spec.name} D={g.D:g} Phi_lat={g.Phi_lat:g}"))
    if traj.failure:
        out.manifest.failures.append({"failure": traj.failure})
        return 1
    return 0


def _optimize(spec, g, config, out: Outputs) -> int:
    n = config.numerics
    best = optimize_phase_offset(spec, g, scan=n.phase_scan, steps_per_cycle=n.steps_per_cycle,
                                 workers=config.workers)
    out.json("optimize.json", {
        "robot": spec.name,
        "D": g.D,
        "Phi_lat": g.Phi_lat,
        "phi_0_deg": math.degrees(best.phi_0),
        "objective": best.objective,
        "displacement": best.displacement,
        "displacement_straight": cycle_displacement(spec, g.straight(), n.steps_per_cycle, best.objective),
        "failed_offsets_deg": [math.degrees(p) for p in best.failed_offsets],
        "phi_bc_deg": math.degrees(phase_lag_from_offset(best.phi_0)),
        "phi_bc_predicted_deg": math.degrees(phase_relation_prediction(g.Phi_lat)),
    })
    return 0


def _stability(spec, g, config, out: Outputs) -> int:
    phases, classes = phase_classification(spec, g, config.numerics.stability_samples)
    out.csv("stability.csv", pd.DataFrame({"phase_deg": np.degrees(phases), "class": [c.value for c in classes]}))
    out.json("stability.json", {
        "robot": spec.name,
        "gait": g.to_dict(),
        "metric": metric_from_classes(classes),
        "counts": {c.value: classes.count(c) for c in StabilityClass},
    })
    return 0


def _surface_frame(result, values: np.ndarray) -> pd.DataFrame:
    D, Phi = np.meshgrid(result.D_grid, result.Phi_grid, indexing="ij")
    return pd.DataFrame({"D": D.ravel(), "Phi_lat": Phi.ravel(), "value": values.ravel()})


def _sweep(spec, g, config, out: Outputs) -> int:
    config.sweep.check()
    n = config.numerics
    result = sweep(spec, config.sweep.D_grid, config.sweep.Phi_grid, config.sweep.mode,
                   steps_per_cycle=n.steps_per_cycle, samples=n.stability_samples, scan=n.phase_scan,
                   workers=config.workers)
    surfaces = [("stability", result.stability, "static stability", "fraction of cycle", True),
                ("blc_straight", result.blc_straight, "fixed straight back", "BLC", False)]
    if result.mode != "straight":
        surfaces.append(("blc_coordinated", result.blc_coordinated, "coordinated undulation", "BLC", False))
        out.csv("phi_0.csv", _surface_frame(result, np.degrees(result.phi_0)))
    for name, values, title, label, blank_zero in surfaces:
        out.csv(f"{name}.csv", _surface_frame(result, values))
        out.svg(f"{name}.svg", render_heatmap(result.D_grid, result.Phi_grid, values,
                                              f"{spec.name}: {title}", label, blank_zero))
    if result.mode != "straight":
        out.svg("sweep_row.svg", render_sweep_row(result))
    out.manifest.failures.extend(result.failures)
    return 0


def _estimate(spec, g, config, out: Outputs) -> int:
    if not config.data:
        raise ConfigError("$.data", "the estimate command needs a dataset (--data)")
    estimate = estimate_gait(FileService.read_dataset(config.data))
    out.json("estimate.json", estimate.to_dict())
    return 0


HANDLERS = {
    "prescribe": _prescribe,
    "connection": _connection,
    "heightfield": _heightfield,
    "simulate": _simulate,
    "optimize": _optimize,
    "stability": _stability,
    "sweep": _sweep,
    "estimate": _estimate,
}


def config_hash(config: RunConfig) -> str:
    canonical = json.dumps(_clean(config.to_dict()), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def run(command: str, config: RunConfig) -> int:
    """Dispatch one subcommand; artifacts and manifest.json go to the output
    directory."""
    if command not in HANDLERS:
        raise ConfigError("$.command", f"expected one of {COMMANDS}")
    spec = FileService.load_robot(config.robot)
    g = None if command in ("sweep", "estimate") else gait_for(spec, config)
    manifest = Manifest(
        command=command,
        config_hash=config_hash(config),
        versions={APP_NAME: __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                  "pandas": pd.__version__, "matplotlib": matplotlib.__version__},
    )
    out = Outputs(Path(config.output_dir), config.formats, manifest)
    logger.info(f"{command}: robot={spec.name} output={config.output_dir}")
    try:
        return HANDLERS[command](spec, g, config, out)
    finally:
        out.close()


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=(args.log_level or LOG_LEVEL).upper())
    try:
        config = config_from_args(args)
        return run(args.command, config)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except GaitlabError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
