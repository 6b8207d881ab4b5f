import math

import numpy as np

from ..models.trajectory import SweepResult
from .figures import cell_edges, colorbar_ticks, colormap, new_figure


def _draw_heatmap(figure, ax, D_grid, Phi_grid, values, title: str, label: str, blank_zero: bool = False):
    values = np.asarray(values, dtype=float)
    hidden = ~np.isfinite(values)
    if blank_zero:
        hidden |= values == 0.0
    finite = values[np.isfinite(values)]
    vmin = float(finite.min()) if finite.size else 0.0
    vmax = float(finite.max()) if finite.size else 1.0
    if math.isclose(vmin, vmax):
        vmax = vmin + 1.0
    mesh = ax.pcolormesh(cell_edges(Phi_grid), cell_edges(D_grid), np.ma.masked_array(values, hidden),
                         cmap=colormap(), vmin=vmin, vmax=vmax, shading="flat")
    bar = figure.colorbar(mesh, ax=ax, ticks=colorbar_ticks(vmin, vmax))
    bar.set_label(label)
    ax.set_xlabel("lateral phase lag Phi_lat")
    ax.set_ylabel("duty factor D")
    ax.set_title(title)


def render_heatmap(D_grid, Phi_grid, values, title: str, label: str, blank_zero: bool = False):
    """Surface over (Phi_lat, D); NaN cells (and zeros with `blank_zero`)
    are left white."""
    figure = new_figure()
    _draw_heatmap(figure, figure.add_subplot(), D_grid, Phi_grid, values, title, label, blank_zero)
    return figure


def render_sweep_row(result: SweepResult):
    """Stability, straight-back BLC and coordinated BLC side by side."""
    figure = new_figure(16.0, 4.5)
    axes = figure.subplots(1, 3)
    panels = [
        (result.stability, "static stability", "fraction of cycle", True),
        (result.blc_straight, "fixed straight back", "BLC", False),
        (result.blc_coordinated, "coordinated undulation", "BLC", False),
    ]
    for ax, (values, title, label, blank_zero) in zip(axes, panels):
        _draw_heatmap(figure, ax, result.D_grid, result.Phi_grid, values, f"{result.robot}: {title}",
                      label, blank_zero)
    return figure
