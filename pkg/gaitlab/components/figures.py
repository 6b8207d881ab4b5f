import matplotlib
matplotlib.use("Agg")
from matplotlib.figure import Figure
import numpy as np

from ..config import HEATMAP_CMAP


def new_figure(width: float = 6.0, height: float = 4.0) -> Figure:
    """Figure detached from pyplot's global state."""
    return Figure(figsize=(width, height), layout="constrained")


def cell_edges(centres) -> np.ndarray:
    centres = np.asarray(centres, dtype=float)
    if centres.size == 1:
        return np.array([centres[0] - 0.025, centres[0] + 0.025])
    mids = 0.5 * (centres[1:] + centres[:-1])
    return np.concatenate([[2 * centres[0] - mids[0]], mids, [2 * centres[-1] - mids[-1]]])


def colormap(name: str = HEATMAP_CMAP):
    cmap = matplotlib.colormaps[name].copy()
    cmap.set_bad("white")
    return cmap


def colorbar_ticks(vmin: float, vmax: float, count: int = 5) -> np.ndarray:
    return np.linspace(vmin, vmax, count)
