import numpy as np

from ..config import HEIGHT_FIELD_CMAP
from ..models.field import HeightField
from ..models.gait import TWO_PI, GaitPath
from .figures import colorbar_ticks, colormap, new_figure

COMPONENTS = ("x", "y", "theta")


def render_height_field(h: HeightField, path: GaitPath):
    """One panel per body-velocity component with the gait path on the
    unwrapped square. Regions: + above the upper path segment, - below the
    lower one."""
    figure = new_figure(15.0, 4.8)
    axes = figure.subplots(1, 3)
    c = np.linspace(0.0, TWO_PI, 256)
    b = c + path.phi_0 % TWO_PI
    upper = b <= TWO_PI
    for r, ax in enumerate(axes):
        values = h.values[..., r]
        limit = float(np.max(np.abs(values))) or 1.0
        image = ax.imshow(values.T, origin="lower", cmap=colormap(HEIGHT_FIELD_CMAP), vmin=-limit, vmax=limit,
                          extent=(0.0, 360.0, 0.0, 360.0), interpolation="nearest")
        figure.colorbar(image, ax=ax, ticks=colorbar_ticks(-limit, limit))
        ax.plot(np.degrees(c[upper]), np.degrees(b[upper]), color="black", linewidth=1.5)
        ax.plot(np.degrees(c[~upper]), np.degrees(b[~upper] - TWO_PI), color="black", linewidth=1.5)
        ax.text(0.03, 0.95, "+", transform=ax.transAxes, fontsize=14, va="top")
        ax.text(0.95, 0.05, "-", transform=ax.transAxes, fontsize=14, ha="right")
        ax.set_xlim(0.0, 360.0)
        ax.set_xlabel("phi_c (deg)")
        ax.set_ylabel("phi_b (deg)")
        ax.set_title(f"height function, {COMPONENTS[r]}")
    figure.suptitle(f"phi_0 = {np.degrees(path.phi_0 % TWO_PI):.1f} deg; "
                    "+ region: phi_b - phi_c > phi_0, - region: phi_b - phi_c < phi_0 - 360")
    return figure
