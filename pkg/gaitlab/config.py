import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Base paths
BASE_DIR = Path(__file__).resolve().parent.parent
OUTPUT_DIR = Path(os.getenv("GAITLAB_OUTPUT_DIR", BASE_DIR / "output"))

# Application settings
APP_NAME = "gaitlab"
LOG_LEVEL = os.getenv("GAITLAB_LOG_LEVEL", "INFO")

# Gait prescription
D_MIN = 0.05

# Contact mechanics
DEFAULT_MU = 1.0
DEFAULT_ANISOTROPY = 2.0  # transverse / longitudinal
DEFAULT_EPSILON_V = 1e-3  # BL per unit phase
WRENCH_TOLERANCE = 1e-8
NEWTON_MAX_ITER = 50
FD_STEP = 1e-6  # rad, shape partials

# Numerics
DEFAULT_STEPS_PER_CYCLE = 128
MIN_STEPS_PER_CYCLE = 64
DEFAULT_GRID_RESOLUTION = 128
MIN_GRID_RESOLUTION = 32
DEFAULT_STABILITY_SAMPLES = 720
MIN_STABILITY_SAMPLES = 360
DEFAULT_PHASE_SCAN = 64
PHASE_TOLERANCE = 1e-3

# File handling
ALLOWED_EXTENSIONS = {".json", ".csv"}
MAX_FILE_SIZE = 50 * 1024 * 1024  # 50MB
CSV_FLOAT_FORMAT = "%.10g"
SVG_HASH_SALT = APP_NAME

# Figures
HEATMAP_CMAP = "viridis"
HEIGHT_FIELD_CMAP = "RdBu_r"


def worker_count() -> int:
    """Bound on parallel workers, from GAITLAB_WORKERS or the CPU count."""
    raw = os.getenv("GAITLAB_WORKERS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)
