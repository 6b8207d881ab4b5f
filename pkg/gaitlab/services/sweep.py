import logging
from typing import Optional, Sequence

import numpy as np

from ..config import DEFAULT_PHASE_SCAN, DEFAULT_STABILITY_SAMPLES, DEFAULT_STEPS_PER_CYCLE
from ..exceptions import GaitlabError
from ..models.gait import GaitParams
from ..models.robot import RobotSpec
from ..models.run_config import SWEEP_MODES
from ..models.trajectory import SweepResult
from .geomech import optimize_phase_offset
from .pool import ordered_map
from .simulate import integrate_gait, speed_blc
from .stability import stability_metric

logger = logging.getLogger(__name__)


def _sweep_cell(task) -> dict:
    spec, D, Phi_lat, mode, steps, samples, scan = task
    cell = {"D": D, "Phi_lat": Phi_lat, "stability": np.nan, "blc_straight": np.nan,
            "blc_coordinated": np.nan, "phi_0": np.nan, "failed_offsets": [], "error": None}
    errors = []

    def attempt(label: str, compute) -> None:
        try:
            compute()
        except GaitlabError as e:
            logger.error(f"{spec.name} cell D={D:.3f} Phi_lat={Phi_lat:.3f}: {label} failed: {e}", exc_info=True)
            errors.append(str(e))

    try:
        g = GaitParams.for_robot(spec, D, Phi_lat)
    except GaitlabError as e:
        cell["error"] = str(e)
        return cell

    def stability() -> None:
        gait = g if np.isnan(cell["phi_0"]) else g.with_phi_0(cell["phi_0"])
        cell["stability"] = stability_metric(spec, gait, samples)

    def straight() -> None:
        cell["blc_straight"] = speed_blc(_complete(integrate_gait(spec, g.straight(), 1, steps)))

    def coordinated() -> None:
        best = optimize_phase_offset(spec, g, scan=scan, steps_per_cycle=steps, objective="blc")
        cell["phi_0"] = best.phi_0
        cell["blc_coordinated"] = best.displacement
        cell["failed_offsets"] = best.failed_offsets

    # legged metrics use a straight backbone, sidewinders need phi_0* first
    if not spec.is_sidewinder:
        attempt("stability", stability)
    attempt("straight simulation", straight)
    if mode != "straight":
        attempt("phase offset optimization", coordinated)
    if spec.is_sidewinder:
        attempt("stability", stability)
    if errors:
        cell["error"] = "; ".join(errors)
    return cell


def _failure_entry(cell: dict) -> dict:
    entry = {"D": cell["D"], "Phi_lat": cell["Phi_lat"], "error": cell["error"]}
    if cell["failed_offsets"]:
        entry["failed_offsets"] = cell["failed_offsets"]
    return entry


def _complete(traj):
    if traj.failure is not None:
        raise GaitlabError(traj.failure)
    return traj


def sweep(spec: RobotSpec, D_grid: Sequence[float], Phi_grid: Sequence[float], mode: str = "both",
          steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE, samples: int = DEFAULT_STABILITY_SAMPLES,
          scan: int = DEFAULT_PHASE_SCAN, workers: Optional[int] = None) -> SweepResult:
    """Stability, straight-back BLC and (unless mode is 'straight') the
    optimized coordinated BLC over a (D, Phi_lat) grid.

    Cells run in a worker pool; results are placed by grid index, so the
    output does not depend on the number of workers. Failed cells stay NaN
    and are listed in `failures`.
    """
    if mode not in SWEEP_MODES:
        raise ValueError(f"mode must be one of {SWEEP_MODES}")
    D_grid = np.asarray(D_grid, dtype=float)
    Phi_grid = np.asarray(Phi_grid, dtype=float)
    if D_grid.size == 0 or Phi_grid.size == 0:
        raise ValueError("sweep grids must not be empty")

    tasks = [(spec, float(D), float(Phi), mode, steps_per_cycle, samples, scan)
             for D in D_grid for Phi in Phi_grid]
    logger.info(f"sweeping {spec.name}: {len(D_grid)} x {len(Phi_grid)} cells, mode={mode}")
    cells = ordered_map(_sweep_cell, tasks, workers)

    shape = (len(D_grid), len(Phi_grid))

    def surface(key: str) -> np.ndarray:
        return np.array([cell[key] for cell in cells], dtype=float).reshape(shape)

    failures = [_failure_entry(c) for c in cells if c["error"] or c["failed_offsets"]]
    if failures:
        logger.warning(f"{len(failures)} of {len(cells)} sweep cells failed")
    return SweepResult(
        robot=spec.name,
        D_grid=D_grid,
        Phi_grid=Phi_grid,
        mode=mode,
        stability=surface("stability"),
        blc_straight=surface("blc_straight"),
        blc_coordinated=surface("blc_coordinated"),
        phi_0=surface("phi_0"),
        failures=failures,
    )
