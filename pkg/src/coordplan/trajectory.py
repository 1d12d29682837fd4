"""Piecewise-linear trajectories in the coordination space and their cost."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoordinationError

GOAL_TOL = 1e-9


class IncompleteTrajectoryError(CoordinationError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Breakpoints ``(times[k], states[k])`` joined by straight segments.

    The state is held constant after the last breakpoint.
    """

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        x = np.asarray(self.states, dtype=float)
        if x.ndim != 2 or t.ndim != 1 or len(t) != len(x) or len(t) == 0:
            raise ValueError("times must be (m,) and states (m, n) with m >= 1")
        if np.any(np.diff(t) <= 0):
            raise ValueError("breakpoint times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", x)

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def at(self, t) -> np.ndarray:
        """State at time ``t`` (scalar) or states at each time (1-D array)."""
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.column_stack([np.interp(ts, self.times, self.states[:, v]) for v in range(self.n)])
        return out[0] if np.ndim(t) == 0 else out

    def exit_times(self) -> np.ndarray:
        out = np.empty(self.n)
        for v in range(self.n):
            col = self.states[:, v]
            hit = np.flatnonzero(col >= 1.0 - GOAL_TOL)
            if len(hit) == 0:
                raise IncompleteTrajectoryError(f"vehicle {v + 1} never reaches 1")
            k = hit[0]
            if k == 0:
                out[v] = self.times[0]
                continue
            x0, x1 = col[k - 1], col[k]
            t0, t1 = self.times[k - 1], self.times[k]
            out[v] = t0 + (1.0 - x0) / (x1 - x0) * (t1 - t0) if x1 > 1.0 else t1
        return out

    def pair_path(self, i: int, j: int) -> np.ndarray:
        """Breakpoints projected onto the plane of vehicles ``i`` and ``j`` (1-based)."""
        return self.states[:, [i - 1, j - 1]]


def cost(traj: Trajectory) -> float:
    """Mean exit time over all vehicles."""
    return float(np.mean(traj.exit_times()))
