from typing import Sequence

import numpy as np

from .figures import new_figure


def render_contact_diagram(phases: np.ndarray, table: np.ndarray, labels: Sequence[str], title: str = ""):
    """Gait diagram: black bars for stance, one row per leg or link."""
    figure = new_figure(7.0, 0.4 * len(labels) + 1.5)
    ax = figure.add_subplot()
    ax.imshow(table, aspect="auto", cmap="Greys", vmin=0, vmax=1, interpolation="nearest",
              extent=(0.0, 360.0, len(labels), 0.0))
    ax.set_yticks(np.arange(len(labels)) + 0.5)
    ax.set_yticklabels(labels)
    ax.set_xticks(np.arange(0, 361, 90))
    ax.set_xlabel("contact phase phi_c (deg)")
    ax.set_title(title)
    return figure
