import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize

from ..config import FD_STEP, NEWTON_MAX_ITER, WRENCH_TOLERANCE
from ..exceptions import NoSupportError, SolverError
from ..models.gait import GaitParams, ShapePoint, ShapeVelocity
from ..models.mechanics import BodyVelocity, LocalConnection
from ..models.robot import FrictionModel, RobotSpec
from .gait import contacts_at, joint_angles
from .morphology import contact_geometry
from .pool import ordered_map

logger = logging.getLogger(__name__)

# Epsilon multiples walked down by the continuation fallback.
CONTINUATION_FACTORS = (1e4, 1e3, 1e2, 3e1, 1e1, 3.0, 1.0)
RESTART_COUNT = 16
RESTART_SEED = 0


def ground_reaction_force(model: FrictionModel, v, link_heading, load=1.0, epsilon: Optional[float] = None) -> np.ndarray:
    """Regularized Coulomb force opposing the contact velocity `v`.

    Works on a single (2,) velocity or an (m, 2) stack with matching headings.
    The anisotropic model scales the component transverse to the link by
    `anisotropy_ratio`. `load` is the normal load scaling mu.
    """
    v = np.asarray(v, dtype=float)
    eps = model.epsilon_v if epsilon is None else epsilon
    speed = np.linalg.norm(v, axis=-1)
    denom = speed + eps
    gain = np.divide(model.mu * np.asarray(load, dtype=float), denom,
                     out=np.zeros_like(denom), where=denom > 0)
    if model.kind == "isotropic_coulomb":
        return -gain[..., None] * v
    heading = np.asarray(link_heading, dtype=float)
    e = np.stack([np.cos(heading), np.sin(heading)], axis=-1)
    n = np.stack([-np.sin(heading), np.cos(heading)], axis=-1)
    v_long = np.sum(v * e, axis=-1)
    v_trans = np.sum(v * n, axis=-1)
    f_long = -gain * v_long
    f_trans = -gain * model.anisotropy_ratio * v_trans
    return f_long[..., None] * e + f_trans[..., None] * n


@dataclass
class ContactProblem:
    """Stance contacts of one shape point, in the body frame.

    `shape_velocity` holds each contact's velocity induced by the shape rate
    alone; the body velocity adds a rigid motion on top of it.
    """
    points: np.ndarray
    shape_velocity: np.ndarray
    headings: np.ndarray
    loads: np.ndarray
    friction: FrictionModel
    epsilon: float

    def contact_velocity(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        spin = xi[2] * np.column_stack([-self.points[:, 1], self.points[:, 0]])
        return xi[:2] + spin + self.shape_velocity

    def forces(self, xi) -> np.ndarray:
        return ground_reaction_force(self.friction, self.contact_velocity(xi), self.headings,
                                     self.loads, self.epsilon)

    def wrench(self, xi) -> np.ndarray:
        f = self.forces(xi)
        torque = np.sum(self.points[:, 0] * f[:, 1] - self.points[:, 1] * f[:, 0])
        return np.array([f[:, 0].sum(), f[:, 1].sum(), torque])

    def rotated(self, beta: float) -> "ContactProblem":
        c, s = np.cos(beta), np.sin(beta)
        rot = np.array([[c, -s], [s, c]])
        return replace(self, points=self.points @ rot.T, shape_velocity=self.shape_velocity @ rot.T,
                       headings=self.headings + beta)

    def scaled_friction(self, factor: float) -> "ContactProblem":
        return replace(self, friction=replace(self.friction, mu=self.friction.mu * factor))


@dataclass
class ShapeJacobian:
    """Candidate contact points at a shape point and their phase partials."""
    points: np.ndarray
    headings: np.ndarray
    d_phi_c: np.ndarray
    d_phi_b: np.ndarray
    in_contact: np.ndarray

    def problem(self, friction: FrictionModel, v: ShapeVelocity) -> ContactProblem:
        mask = self.in_contact.astype(bool)
        m = int(mask.sum())
        shape_velocity = v.d_phi_c * self.d_phi_c[mask] + v.d_phi_b * self.d_phi_b[mask]
        return ContactProblem(
            points=self.points[mask],
            shape_velocity=shape_velocity,
            headings=self.headings[mask],
            loads=np.full(m, 1.0 / m),
            friction=friction,
            epsilon=friction.epsilon_v * v.norm,
        )


def _candidates(spec: RobotSpec, g: GaitParams, phi_c: float, phi_b: float) -> Tuple[np.ndarray, np.ndarray]:
    alphas, theta_left, theta_right = joint_angles(spec, g, phi_c, phi_b)
    feet, midpoints, headings = contact_geometry(spec, alphas, theta_left, theta_right)
    if spec.is_sidewinder:
        return midpoints, headings
    return feet, np.tile(headings[np.asarray(spec.leg_links, dtype=int)], 2)


def shape_jacobian(spec: RobotSpec, g: GaitParams, p: ShapePoint, contact_phase: Optional[float] = None,
                   step: float = FD_STEP) -> ShapeJacobian:
    """Contact candidates with central-difference partials of their body-frame
    positions. Contacts are taken at `contact_phase` when given."""
    points, headings = _candidates(spec, g, p.phi_c, p.phi_b)
    plus_c, _ = _candidates(spec, g, p.phi_c + step, p.phi_b)
    minus_c, _ = _candidates(spec, g, p.phi_c - step, p.phi_b)
    plus_b, _ = _candidates(spec, g, p.phi_c, p.phi_b + step)
    minus_b, _ = _candidates(spec, g, p.phi_c, p.phi_b - step)
    left, right, links = contacts_at(spec, g, p.phi_c if contact_phase is None else contact_phase)
    in_contact = links if spec.is_sidewinder else np.concatenate([left, right])
    if not in_contact.any():
        raise NoSupportError(p.phi_c, p.phi_b)
    return ShapeJacobian(
        points=points,
        headings=headings,
        d_phi_c=(plus_c - minus_c) / (2.0 * step),
        d_phi_b=(plus_b - minus_b) / (2.0 * step),
        in_contact=in_contact,
    )


def build_contact_problem(spec: RobotSpec, g: GaitParams, p: ShapePoint, v: ShapeVelocity,
                          contact_phase: Optional[float] = None) -> ContactProblem:
    return shape_jacobian(spec, g, p, contact_phase).problem(spec.friction, v)


def contact_point_velocity(spec: RobotSpec, g: GaitParams, p: ShapePoint, v: ShapeVelocity,
                           xi: BodyVelocity, index: int, heading: float = 0.0) -> np.ndarray:
    """World-frame velocity of contact candidate `index` (foot for legged
    chains, ordered left pairs then right pairs; link for sidewinders) for a
    body frame at world `heading`."""
    jac = shape_jacobian(spec, g, p)
    if not 0 <= index < len(jac.points):
        raise ValueError(f"contact index {index} out of range")
    if not jac.in_contact[index]:
        raise ValueError(f"contact {index} is not in stance at phi_c={p.phi_c:.6f}")
    r = jac.points[index]
    shape_rate = v.d_phi_c * jac.d_phi_c[index] + v.d_phi_b * jac.d_phi_b[index]
    local = np.array([xi.xi_x - xi.xi_theta * r[1], xi.xi_y + xi.xi_theta * r[0]]) + shape_rate
    c, s = np.cos(heading), np.sin(heading)
    return np.array([c * local[0] - s * local[1], s * local[0] + c * local[1]])


def net_wrench(spec: RobotSpec, g: GaitParams, p: ShapePoint, v: ShapeVelocity, xi: BodyVelocity) -> np.ndarray:
    """(F_x, F_y, tau) of all stance contacts, torque about the body origin."""
    return build_contact_problem(spec, g, p, v).wrench(xi.as_array())


def _converged(f: np.ndarray, tol: float) -> bool:
    return bool(np.hypot(f[0], f[1]) < tol and abs(f[2]) < tol)


def _fd_jacobian(residual: Callable, x: np.ndarray, step: float = 1e-7) -> np.ndarray:
    jac = np.empty((3, 3))
    for k in range(3):
        h = step * max(1.0, abs(x[k]))
        dx = np.zeros(3)
        dx[k] = h
        jac[:, k] = (residual(x + dx) - residual(x - dx)) / (2.0 * h)
    return jac


def newton(residual: Callable, x0: np.ndarray, tol: float = WRENCH_TOLERANCE,
           max_iter: int = NEWTON_MAX_ITER) -> Tuple[np.ndarray, bool]:
    """Damped Newton with a finite-difference Jacobian and backtracking on
    the residual norm. Returns (x, converged); stops early on a stall."""
    x = np.array(x0, dtype=float)
    f = residual(x)
    for _ in range(max_iter):
        if _converged(f, tol):
            return x, True
        step = np.linalg.lstsq(_fd_jacobian(residual, x), -f, rcond=None)[0]
        norm = np.linalg.norm(f)
        t = 1.0
        while True:
            candidate = x + t * step
            f_candidate = residual(candidate)
            if np.linalg.norm(f_candidate) < (1.0 - 1e-4 * t) * norm:
                break
            t *= 0.5
            if t < 1e-8:
                return x, False
        x, f = candidate, f_candidate
    return x, _converged(f, tol)


def _closer(residual: Callable, a: Optional[np.ndarray], b: np.ndarray) -> np.ndarray:
    if a is None or np.linalg.norm(residual(b)) < np.linalg.norm(residual(a)):
        return b
    return a


def _polish(residual: Callable, x0: np.ndarray, tol: float) -> Tuple[np.ndarray, bool]:
    """Newton, then Powell's hybrid method from wherever Newton stopped."""
    x, ok = newton(residual, x0, tol)
    if ok:
        return x, True
    sol = optimize.root(residual, x, method="hybr", options={"xtol": 1e-14})
    if np.all(np.isfinite(sol.x)):
        x = _closer(residual, x, sol.x)
    return x, _converged(residual(x), tol)


def _continuation(problem: ContactProblem, tol: float) -> Tuple[np.ndarray, bool]:
    """Follow the root down from a heavily regularized, nearly viscous
    balance to the problem's own epsilon."""
    x, ok = np.zeros(3), False
    for factor in CONTINUATION_FACTORS:
        x, ok = _polish(replace(problem, epsilon=problem.epsilon * factor).wrench, x, tol)
    return x, ok


def _restarts(problem: ContactProblem, count: int) -> np.ndarray:
    """Seeded starts scaled to the contact speeds and the support radius."""
    rng = np.random.default_rng(RESTART_SEED)
    speed = max(float(np.linalg.norm(problem.shape_velocity, axis=1).max()), problem.epsilon, 1e-12)
    reach = max(float(np.linalg.norm(problem.points, axis=1).max()), 1e-3)
    return rng.uniform(-1.0, 1.0, size=(count, 3)) * np.array([speed, speed, speed / reach])


def solve_contact_problem(problem: ContactProblem, shape_point: Optional[Tuple[float, float]] = None,
                          tol: float = WRENCH_TOLERANCE, x0: Optional[np.ndarray] = None) -> np.ndarray:
    """Body velocity that zeroes the net wrench of `problem`.

    Tries `x0` (a warm start) and rest first. When both stall, continues in
    epsilon from a nearly viscous balance, then retries from seeded random
    starts, and finally runs Nelder-Mead on the squared residual.
    """
    residual = problem.wrench
    best = None
    starts = [np.zeros(3)] if x0 is None else [np.asarray(x0, dtype=float), np.zeros(3)]
    for start in starts:
        x, ok = _polish(residual, start, tol)
        if ok:
            return x
        best = _closer(residual, best, x)

    logger.debug(f"Newton stalled at {shape_point}; continuing in epsilon")
    x, ok = _continuation(problem, tol)
    if ok:
        return x
    best = _closer(residual, best, x)

    for start in _restarts(problem, RESTART_COUNT):
        x, ok = _polish(residual, start, tol)
        if ok:
            logger.debug(f"force balance at {shape_point} solved from a random restart")
            return x
        best = _closer(residual, best, x)

    sol = optimize.minimize(lambda z: float(np.sum(residual(z) ** 2)), best, method="Nelder-Mead",
                            options={"xatol": 1e-14, "fatol": 1e-24, "maxiter": 20000})
    x = _closer(residual, best, sol.x)
    if not _converged(residual(x), tol):
        raise SolverError(f"force balance did not converge (|wrench|={np.linalg.norm(residual(x)):.3e})",
                          shape_point)
    return x


def solve_body_velocity(spec: RobotSpec, g: GaitParams, p: ShapePoint, v: ShapeVelocity,
                        contact_phase: Optional[float] = None, guess: Optional[BodyVelocity] = None) -> BodyVelocity:
    """Quasi-static body velocity for a shape velocity at a shape point.
    `guess` warm-starts the solver, typically with the previous step's
    solution."""
    problem = build_contact_problem(spec, g, p, v, contact_phase)
    if v.norm == 0.0:
        return BodyVelocity.zero()
    x0 = None if guess is None else guess.as_array()
    return BodyVelocity.from_array(solve_contact_problem(problem, (p.phi_c, p.phi_b), x0=x0))


def local_connection_at(spec: RobotSpec, g: GaitParams, p: ShapePoint, direction: Optional[ShapeVelocity] = None,
                        contact_phase: Optional[float] = None) -> LocalConnection:
    """Columnwise connection A(p); with `direction`, also the exact solve for
    that composite shape rate and its distance from A @ direction."""
    jac = shape_jacobian(spec, g, p, contact_phase)
    where = (p.phi_c, p.phi_b)
    columns = [
        solve_contact_problem(jac.problem(spec.friction, ShapeVelocity(1.0, 0.0)), where),
        solve_contact_problem(jac.problem(spec.friction, ShapeVelocity(0.0, 1.0)), where),
    ]
    connection = LocalConnection(p.phi_c, p.phi_b, np.column_stack(columns))
    if direction is not None:
        linear = connection.a @ np.array([direction.d_phi_c, direction.d_phi_b])
        if direction.norm == 0.0:
            exact = np.zeros(3)
        else:
            exact = solve_contact_problem(jac.problem(spec.friction, direction), where, x0=linear)
        connection.directional = BodyVelocity.from_array(exact)
        connection.linearization_error = float(np.linalg.norm(exact - linear))
        logger.debug(f"linearization error {connection.linearization_error:.3e} at {where}")
    return connection


def _connection_row(task) -> Tuple[np.ndarray, list, int]:
    spec, g, phi_c, phases = task
    row = np.zeros((len(phases), 3, 2))
    failures = []
    unsupported = 0
    for j, phi_b in enumerate(phases):
        try:
            row[j] = local_connection_at(spec, g, ShapePoint(phi_c, phi_b)).a
        except NoSupportError:
            unsupported += 1
        except SolverError:
            failures.append((float(phi_c), float(phi_b)))
    return row, failures, unsupported


def connection_table(spec: RobotSpec, g: GaitParams, resolution: int,
                     workers: Optional[int] = 1) -> Tuple[np.ndarray, np.ndarray, list]:
    """Columnwise connection on the half-offset R x R grid.

    Returns (phases, table[i_c, j_b, row, column], failures). Shape points
    without support and failed solves are left at zero; failures lists the
    latter as (phi_c, phi_b).
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    phases = 2.0 * np.pi * (np.arange(resolution) + 0.5) / resolution
    rows = ordered_map(_connection_row, [(spec, g, float(c), phases) for c in phases], workers)
    table = np.stack([row for row, _, _ in rows])
    failures = [point for _, row_failures, _ in rows for point in row_failures]
    unsupported = sum(count for _, _, count in rows)
    if unsupported:
        logger.warning(f"{spec.name}: {unsupported} grid points without support; connection set to zero")
    return phases, table, failures
