"""
Exception types raised by gaitlab
"""
from typing import Optional, Sequence, Tuple


class GaitlabError(Exception):
    """Base class for all gaitlab errors."""


class ConfigError(GaitlabError, ValueError):
    """Invalid configuration or robot document. `path` is a JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class NoSupportError(GaitlabError):
    """No contact with the ground at the requested shape point."""

    def __init__(self, phi_c: float, phi_b: float):
        self.phi_c = phi_c
        self.phi_b = phi_b
        super().__init__(f"no contacts at phi_c={phi_c:.6f}, phi_b={phi_b:.6f}")


class SolverError(GaitlabError):
    """Force/torque balance did not converge."""

    def __init__(self, message: str, shape_point: Optional[Tuple[float, float]] = None):
        self.shape_point = shape_point
        if shape_point is not None:
            message = f"{message} at phi_c={shape_point[0]:.6f}, phi_b={shape_point[1]:.6f}"
        super().__init__(message)


class HeightFieldError(SolverError):
    def __init__(self, failures: Sequence[Tuple[float, float]], total: int):
        self.failures = list(failures)
        listed = ", ".join(f"({c:.4f}, {b:.4f})" for c, b in self.failures[:10])
        more = "" if len(self.failures) <= 10 else f" and {len(self.failures) - 10} more"
        super().__init__(
            f"connection solve failed at {len(self.failures)}/{total} grid points: {listed}{more}"
        )


class FitError(GaitlabError):
    """Waveform fit failed or was degenerate."""
