"""
Height functions on the (phi_c, phi_b) torus, Stokes estimates of the
per-cycle displacement, and the body-leg phase offset optimizer.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import optimize
from scipy.interpolate import RegularGridInterpolator

from ..config import (DEFAULT_GRID_RESOLUTION, DEFAULT_PHASE_SCAN, DEFAULT_STEPS_PER_CYCLE,
                      MIN_GRID_RESOLUTION, PHASE_TOLERANCE)
from ..exceptions import HeightFieldError, SolverError
from ..models.field import HeightField, PhaseOffsetResult
from ..models.gait import TWO_PI, GaitParams, GaitPath
from ..models.robot import RobotSpec
from .contact_mechanics import connection_table
from .pool import ordered_map
from .simulate import cycle_displacement

logger = logging.getLogger(__name__)

# Share of grid points allowed to fail before a height field is rejected.
MAX_FAILURE_FRACTION = 0.01
# Added to |best| as the refinement's score for an offset that fails.
REFINEMENT_PENALTY = 1.0


def curl(connection: np.ndarray, cell: float) -> np.ndarray:
    """dA_b/dphi_c - dA_c/dphi_b per body-velocity row, periodic central
    differences. `connection` is indexed [i_c, j_b, row, column]."""
    a_c = connection[..., 0]
    a_b = connection[..., 1]
    d_b_dc = (np.roll(a_b, -1, axis=0) - np.roll(a_b, 1, axis=0)) / (2.0 * cell)
    d_c_db = (np.roll(a_c, -1, axis=1) - np.roll(a_c, 1, axis=1)) / (2.0 * cell)
    return d_b_dc - d_c_db


def compute_height_field(spec: RobotSpec, g: GaitParams, resolution: int = DEFAULT_GRID_RESOLUTION,
                         workers: Optional[int] = 1) -> HeightField:
    if resolution < MIN_GRID_RESOLUTION:
        raise ValueError(f"resolution must be >= {MIN_GRID_RESOLUTION}")
    _, table, failures = connection_table(spec, g, resolution, workers)
    total = resolution * resolution
    if len(failures) > MAX_FAILURE_FRACTION * total:
        raise HeightFieldError(failures, total)
    if failures:
        logger.warning(f"{spec.name}: connection solve failed at {len(failures)}/{total} grid points")
    return HeightField(resolution=resolution, values=curl(table, TWO_PI / resolution), connection=table)


def _area_above(shift: np.ndarray) -> np.ndarray:
    """Fraction of a grid cell where (phi_b - phi_c) exceeds the cell-centre
    difference by `shift` cells."""
    s = np.clip(shift, -1.0, 1.0)
    return np.where(s >= 0.0, 0.5 * (1.0 - s) ** 2, 1.0 - 0.5 * (1.0 + s) ** 2)


def region_weights(h: HeightField, phi_0: float) -> np.ndarray:
    """Signed cell weights of the assistive-line regions on the unwrapped
    square: +1 above the upper path segment (phi_b - phi_c > phi_0), -1 below
    the lower one (phi_b - phi_c < phi_0 - 2pi). Cut cells get exact area
    fractions."""
    phases = h.phases
    diff = phases[None, :] - phases[:, None]
    upper = _area_above((phi_0 - diff) / h.cell)
    lower = 1.0 - _area_above((phi_0 - TWO_PI - diff) / h.cell)
    return upper - lower


def _check_path(path: GaitPath) -> None:
    if tuple(path.winding) != (1, 1):
        raise ValueError(f"only (1,1)-winding gait paths are supported, got {tuple(path.winding)}")


def stokes_displacement(h: HeightField, path: GaitPath) -> Tuple[float, float, float]:
    """First-order (dx, dy, dtheta) per cycle along `path`.

    Signed area integral of the height function over the two assistive-line
    regions, plus the two loop integrals along phi_b = 0 and phi_c = 0 that
    close a (1,1) path on the torus.
    """
    _check_path(path)
    phi_0 = path.phi_0 % TWO_PI
    weights = region_weights(h, phi_0) * h.cell ** 2
    area = np.einsum("ij,ijr->r", weights, h.values)
    a_c = h.connection[..., 0]
    a_b = h.connection[..., 1]
    along_c = 0.5 * (a_c[:, 0] + a_c[:, -1]).sum(axis=0) * h.cell
    along_b = 0.5 * (a_b[0, :] + a_b[-1, :]).sum(axis=0) * h.cell
    total = area + along_c + along_b
    return float(total[0]), float(total[1]), float(total[2])


def line_integral(h: HeightField, path: GaitPath, samples: Optional[int] = None) -> Tuple[float, float, float]:
    """Direct quadrature of the connection along `path`, bilinear on the
    periodic grid."""
    _check_path(path)
    phases = h.phases
    coords = np.concatenate([[phases[0] - h.cell], phases, [phases[-1] + h.cell]])
    combined = np.pad(h.connection.sum(axis=3), ((1, 1), (1, 1), (0, 0)), mode="wrap")
    interp = RegularGridInterpolator((coords, coords), combined)
    n = samples or 4 * h.resolution
    s = TWO_PI * (np.arange(n) + 0.5) / n
    points = np.column_stack([s, path.phi_b(s)])
    total = interp(points).sum(axis=0) * (TWO_PI / n)
    return float(total[0]), float(total[1]), float(total[2])


def _scan_point(task) -> Tuple[float, Optional[str]]:
    spec, g, phi_0, steps, objective = task
    try:
        return cycle_displacement(spec, g.with_phi_0(phi_0), steps, objective), None
    except SolverError as e:
        return -math.inf, str(e)


def optimize_phase_offset(spec: RobotSpec, g: GaitParams, scan: int = DEFAULT_PHASE_SCAN,
                          tol: float = PHASE_TOLERANCE, steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE,
                          workers: Optional[int] = 1, objective: Optional[str] = None) -> PhaseOffsetResult:
    """Phase offset phi_0 maximizing simulated per-cycle displacement.

    Uniform scan, then a bounded refinement inside the neighbouring scan
    cells. The first scan maximum wins ties, and the refinement is kept only
    if it strictly improves on it. Offsets whose simulation fails score -inf
    and are reported; the optimization fails only if every scan point does.
    """
    if g.undulation != "coordinated":
        raise ValueError("phase offset optimization requires coordinated undulation")
    if scan < 3:
        raise ValueError("scan must be >= 3")
    objective = objective or ("blc" if spec.is_sidewinder else "forward")
    grid = TWO_PI * np.arange(scan) / scan
    scores = ordered_map(_scan_point, [(spec, g, float(p), steps_per_cycle, objective) for p in grid], workers)
    values = np.array([value for value, _ in scores])
    failed = [float(p) for p, (_, error) in zip(grid, scores) if error is not None]
    if len(failed) == scan:
        raise SolverError(f"simulation failed at every scanned phase offset ({scores[0][1]})")
    if failed:
        logger.warning(f"{spec.name} D={g.D:.3f} Phi_lat={g.Phi_lat:.3f}: "
                       f"{len(failed)}/{scan} scanned offsets failed")
    k = int(np.argmax(values))
    best_phi, best = float(grid[k]), float(values[k])

    def negated(x: float) -> float:
        try:
            return -cycle_displacement(spec, g.with_phi_0(x), steps_per_cycle, objective)
        except SolverError:
            failed.append(float(x % TWO_PI))
            return abs(best) + REFINEMENT_PENALTY

    width = TWO_PI / scan
    result = optimize.minimize_scalar(negated, bounds=(best_phi - width, best_phi + width), method="bounded",
                                      options={"xatol": tol})
    if result.success and -result.fun > best + 1e-12:
        best_phi, best = float(result.x % TWO_PI), float(-result.fun)
    logger.info(f"{spec.name} D={g.D:.3f} Phi_lat={g.Phi_lat:.3f}: phi_0*={best_phi:.4f} rad, "
                f"{objective}={best:.6f}")
    return PhaseOffsetResult(phi_0=best_phi, displacement=best, objective=objective, failed_offsets=failed)


def phase_lag_from_offset(phi_0: float) -> float:
    """phi_bc = phi_c - phi_b = -phi_0 on the gait path."""
    return (-phi_0) % TWO_PI


def phase_relation_prediction(Phi_lat: float) -> float:
    """Predicted body-leg phase lag, (Phi_lat + 1/2) pi mod 2pi."""
    return ((Phi_lat + 0.5) * math.pi) % TWO_PI
