"""
Gait parameter estimation from joint-angle time series.

Each shoulder series is fitted with the piecewise-cosine leg waveform, the
lateral phase lag comes from ipsilateral phase differences, and the body
series are fitted with a two-term Fourier series to recover the body-leg
phase lag. All phase averaging is circular.
"""
import logging
import math
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from scipy import optimize, stats

from ..config import D_MIN
from ..exceptions import FitError
from ..models.estimate import BodyFit, GaitEstimate, LegFit, TrajectoryDataset
from ..models.gait import TWO_PI, GaitParams
from ..models.robot import RobotSpec
from .gait import SIDES, contacts_at, joint_angles, leg_label, shoulder_waveform
from .geomech import phase_relation_prediction

logger = logging.getLogger(__name__)

START_PHASES = 8
START_DUTY_FACTORS = (0.3, 0.5, 0.7)
D_MAX_FIT = 0.99
MIN_CYCLES = 1.5


def circular_mean(angles: Iterable[float]) -> float:
    return float(stats.circmean(np.asarray(list(angles), dtype=float), high=TWO_PI, low=0.0))


def _dominant_period(time: np.ndarray, series: np.ndarray) -> float:
    dt = float(np.median(np.diff(time)))
    if not dt > 0:
        raise FitError("time stamps must be strictly increasing")
    spectrum = np.abs(np.fft.rfft(series - series.mean()))
    freqs = np.fft.rfftfreq(len(series), dt)
    if len(spectrum) < 2:
        raise FitError("series too short for a period estimate")
    k = 1 + int(np.argmax(spectrum[1:]))
    return 1.0 / freqs[k]


def fit_leg_model(series, time) -> LegFit:
    """Least-squares fit of the leg waveform over (D, A_theta, phase, period).

    The returned phase is referred to t = 0: the series is modelled as
    waveform(2 pi t / period + phase).
    """
    y = np.asarray(series, dtype=float)
    t = np.asarray(time, dtype=float)
    if len(y) != len(t):
        raise FitError(f"series has {len(y)} samples but time has {len(t)}")
    if len(y) < 8:
        raise FitError("too few samples to fit")
    if np.ptp(y) < 1e-9:
        raise FitError("series is flat; amplitude would be ~0")
    tau = t - t[0]
    period0 = _dominant_period(tau, y)
    if tau[-1] / period0 < MIN_CYCLES:
        raise FitError(f"series spans {tau[-1] / period0:.2f} cycles, need at least {MIN_CYCLES}")

    def residual(x):
        D, amplitude, phase, period = x
        return shoulder_waveform(TWO_PI * tau / period + phase, D, amplitude) - y

    lower = [D_MIN, 0.0, -np.inf, 0.5 * period0]
    upper = [D_MAX_FIT, np.inf, np.inf, 1.5 * period0]
    best = None
    for D0 in START_DUTY_FACTORS:
        for k in range(START_PHASES):
            x0 = [D0, 0.5 * np.ptp(y), TWO_PI * k / START_PHASES, period0]
            try:
                sol = optimize.least_squares(residual, x0, bounds=(lower, upper), max_nfev=2000)
            except (ValueError, np.linalg.LinAlgError) as e:
                logger.debug(f"leg fit start D={D0} k={k} failed: {e}")
                continue
            if not sol.success:
                continue
            D, amplitude, phase, period = sol.x
            key = (float(sol.cost), float(D), float(amplitude), float(phase % TWO_PI), float(period))
            if best is None or key < best:
                best = key
    if best is None:
        raise FitError("no start of the leg fit converged")
    cost, D, amplitude, phase, period = best
    if amplitude < 1e-9:
        raise FitError("fitted amplitude is ~0")
    phase = (phase - TWO_PI * t[0] / period) % TWO_PI
    rms = math.sqrt(2.0 * cost / len(y))
    return LegFit(D=D, amplitude=amplitude, phase=phase, period=period, residual=rms)


def estimate_lateral_phase_lag(leg_phases: Dict[Tuple[str, int], float]) -> float:
    """Circular mean of consecutive ipsilateral phase differences, as a
    fraction of the cycle in [0, 1)."""
    diffs = []
    for side in SIDES:
        pairs = sorted(pair for s, pair in leg_phases if s == side)
        for a, b in zip(pairs[:-1], pairs[1:]):
            if b - a == 1:
                diffs.append(leg_phases[(side, b)] - leg_phases[(side, a)])
    if not diffs:
        raise FitError("need at least two adjacent fitted legs on one side")
    lag = circular_mean(diffs) / TWO_PI
    if lag >= 1.0 - 1e-9:
        lag = 0.0
    return lag % 1.0


def fit_body_fourier(series, time, period: float) -> BodyFit:
    """Two-term Fourier fit a0 + a1 cos + b1 sin + a2 cos2 + b2 sin2.

    The phase is the lead beta of the fundamental written as
    R cos(omega t + beta), i.e. atan2(-b1, a1).
    """
    y = np.asarray(series, dtype=float)
    t = np.asarray(time, dtype=float)
    if not period > 0:
        raise FitError("period must be > 0")
    w = TWO_PI / period
    design = np.column_stack([np.ones_like(t), np.cos(w * t), np.sin(w * t),
                              np.cos(2 * w * t), np.sin(2 * w * t)])
    if len(t) < 5 or np.linalg.matrix_rank(design) < 5:
        raise FitError("singular Fourier design matrix")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    a0, a1, b1, a2, b2 = (float(c) for c in coef)
    amplitude = math.hypot(a1, b1)
    oscillatory = amplitude > 1e-9 * max(1.0, abs(a0))
    if not oscillatory:
        logger.warning("body series has no oscillation at the gait frequency")
    phase = math.atan2(-b1, a1) % TWO_PI if oscillatory else 0.0
    rms = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
    return BodyFit(coefficients=(a0, a1, b1, a2, b2), phase=phase, amplitude=amplitude,
                   oscillatory=oscillatory, residual=rms)


def estimate_phi_bc(leg_phase: float, body_phase: float) -> float:
    """phi_c - phi_b as a circular difference in [0, 2 pi)."""
    return (leg_phase - body_phase) % TWO_PI


def synthesize_dataset(spec: RobotSpec, g: GaitParams, cycles: int = 3, samples_per_cycle: int = 200,
                       period: float = 1.0, noise: float = 0.0, seed: int = 0) -> TrajectoryDataset:
    """Joint-angle series of a prescribed gait with phi_c = 2 pi t / period.

    `noise` is the Gaussian standard deviation as a fraction of each
    series' amplitude.
    """
    if spec.is_sidewinder:
        raise ValueError("synthetic datasets need a legged robot")
    if cycles < 1 or samples_per_cycle < 8:
        raise ValueError("need cycles >= 1 and samples_per_cycle >= 8")
    time = period * np.arange(cycles * samples_per_cycle) / samples_per_cycle
    n = spec.n_leg_pairs
    left = np.empty((len(time), n))
    right = np.empty((len(time), n))
    body = np.empty((len(time), spec.n_body_joints))
    stance = np.empty((len(time), 2 * n), dtype=int)
    for k, tk in enumerate(time):
        phi_c = TWO_PI * tk / period
        body[k], left[k], right[k] = joint_angles(spec, g, phi_c, phi_c + g.phi_0)
        contact_left, contact_right, _ = contacts_at(spec, g, phi_c)
        stance[k] = np.concatenate([contact_left, contact_right])

    rng = np.random.default_rng(seed)
    if noise:
        left += noise * g.A_theta * rng.standard_normal(left.shape)
        right += noise * g.A_theta * rng.standard_normal(right.shape)
        body += noise * g.effective_A_alpha * rng.standard_normal(body.shape)

    legs = {}
    footfalls = {}
    for j in range(n):
        legs[("left", j + 1)] = left[:, j]
        legs[("right", j + 1)] = right[:, j]
    for column, (side, pair) in enumerate([(s, j + 1) for s in SIDES for j in range(n)]):
        touchdown = np.flatnonzero(np.diff(stance[:, column]) == 1) + 1
        footfalls[(side, pair)] = [float(time[i]) for i in touchdown]
    return TrajectoryDataset(time=time, legs=legs, body={i + 1: body[:, i] for i in range(spec.n_body_joints)},
                             footfalls=footfalls)


def estimate_gait(dataset: TrajectoryDataset, Phi_lat_b: Optional[float] = None) -> GaitEstimate:
    """Full estimation pipeline over a dataset.

    The reference leg phase and the body phase are circular means over all
    legs and body joints, each corrected by its expected lag. Body joints
    are assumed to share the legs' phase lag unless `Phi_lat_b` is given.
    """
    if not dataset.legs:
        raise FitError("dataset has no leg series")
    n_pairs = max(pair for _, pair in dataset.legs)
    fits = {key: fit_leg_model(series, dataset.time) for key, series in sorted(dataset.legs.items())}
    phases = {key: fit.phase for key, fit in fits.items()}
    Phi_lat = estimate_lateral_phase_lag(phases)
    D = float(np.mean([fit.D for fit in fits.values()]))
    A_theta = float(np.mean([fit.amplitude for fit in fits.values()]))
    period = float(np.median([fit.period for fit in fits.values()]))

    references = []
    for (side, pair), phase in phases.items():
        shift = TWO_PI * (pair - 1) * Phi_lat + (math.pi if side == "right" else 0.0)
        references.append(phase - shift)
    leg_phase = circular_mean(references)
    residuals = {leg_label(pair, side, n_pairs): fit.residual for (side, pair), fit in fits.items()}

    body_lag = Phi_lat if Phi_lat_b is None else Phi_lat_b
    body_phases = []
    for joint, series in sorted(dataset.body.items()):
        fit = fit_body_fourier(series, dataset.time, period)
        residuals[f"alpha_{joint}"] = fit.residual
        if fit.oscillatory:
            body_phases.append(fit.phase + TWO_PI * (joint - 1) * body_lag)
    phi_bc = estimate_phi_bc(leg_phase, circular_mean(body_phases)) if body_phases else None
    if phi_bc is None:
        logger.warning("no oscillating body series; phi_bc not estimated")

    estimate = GaitEstimate(
        D=D,
        Phi_lat=Phi_lat,
        A_theta=A_theta,
        period=period,
        leg_phases={leg_label(pair, side, n_pairs): phase for (side, pair), phase in phases.items()},
        phi_bc=phi_bc,
        phi_bc_predicted=phase_relation_prediction(Phi_lat),
        residuals=residuals,
    )
    logger.info(f"estimated D={D:.3f} Phi_lat={Phi_lat:.3f} period={period:.4f}")
    return estimate
