from ..models.trajectory import Trajectory
from .figures import new_figure


def render_trajectory(traj: Trajectory, title: str = ""):
    figure = new_figure(5.0, 5.0)
    ax = figure.add_subplot()
    ax.plot(traj.poses[:, 0], traj.poses[:, 1], color="tab:blue")
    ax.plot(traj.poses[0, 0], traj.poses[0, 1], "o", color="black")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x (BL)")
    ax.set_ylabel("y (BL)")
    ax.set_title(title or f"{traj.cycles} cycle(s)")
    return figure
