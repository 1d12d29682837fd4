"""Compile physical paths and disc-shaped vehicles into obstacle rectangles."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .coordspace import CollisionRect, CoordinationScenario
from .errors import ScenarioError


@dataclass(frozen=True)
class PathGeometry:
    """Polyline path parameterized by normalized arc length."""

    id: int
    waypoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.waypoints)
        object.__setattr__(self, "waypoints", pts)
        if len(pts) < 2:
            raise ScenarioError(f"path {self.id}: need at least 2 waypoints")
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise ScenarioError(f"path {self.id}: repeated waypoint {p}")

    @property
    def cumulative(self) -> np.ndarray:
        seg = np.hypot(*np.diff(np.asarray(self.waypoints), axis=0).T)
        return np.concatenate([[0.0], np.cumsum(seg)])

    @property
    def length(self) -> float:
        return float(self.cumulative[-1])


@dataclass(frozen=True)
class VehicleSpec:
    id: int
    path_id: int
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ScenarioError(f"vehicle {self.id}: radius must be > 0")


@dataclass(frozen=True)
class GeometricScenario:
    paths: tuple[PathGeometry, ...]
    vehicles: tuple[VehicleSpec, ...]
    initial_positions: tuple[float, ...]

    def __post_init__(self):
        ids = sorted(v.id for v in self.vehicles)
        if ids != list(range(1, len(ids) + 1)):
            raise ScenarioError(f"vehicle ids must be 1..n without gaps, got {ids}")
        path_ids = {p.id for p in self.paths}
        if len(path_ids) != len(self.paths):
            raise ScenarioError("duplicate path id")
        for v in self.vehicles:
            if v.path_id not in path_ids:
                raise ScenarioError(f"vehicle {v.id}: unknown path_id {v.path_id}")
        if len(self.initial_positions) != len(self.vehicles):
            raise ScenarioError("initial_positions must list one value per vehicle")
        for k, s in enumerate(self.initial_positions):
            if not (0.0 <= s < 1.0):
                raise ScenarioError(f"initial position of vehicle {k + 1} must lie in [0,1)")

    def path_of(self, vehicle_id: int) -> PathGeometry:
        v = next(v for v in self.vehicles if v.id == vehicle_id)
        return next(p for p in self.paths if p.id == v.path_id)

    def radius_of(self, vehicle_id: int) -> float:
        return next(v.radius for v in self.vehicles if v.id == vehicle_id)


def eval_path(path: PathGeometry, s):
    """Point at normalized arc length ``s`` (scalar or array) along ``path``."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0.0) or np.any(s_arr > 1.0):
        raise ValueError(f"arc-length parameter {s!r} outside [0, 1]")
    cum = path.cumulative
    pts = np.asarray(path.waypoints)
    d = s_arr * cum[-1]
    out = np.stack([np.interp(d, cum, pts[:, 0]), np.interp(d, cum, pts[:, 1])], axis=-1)
    if out.ndim == 1:
        return (float(out[0]), float(out[1]))
    return out


@dataclass(frozen=True)
class CrossSectionSample:
    """Sampled collision grid; ``grid[a, b]`` is the sample at ``(s[a], s[b])``."""

    s: np.ndarray
    grid: np.ndarray
    rect: Optional[tuple[tuple[float, float], tuple[float, float]]]


def sample_cross_section(
    path_i: PathGeometry, path_j: PathGeometry, r_i: float, r_j: float, grid_resolution: int
) -> CrossSectionSample:
    if grid_resolution < 16:
        raise ValueError("grid_resolution must be >= 16")
    s = np.linspace(0.0, 1.0, grid_resolution)
    pi = eval_path(path_i, s)
    pj = eval_path(path_j, s)
    dx = pi[:, None, 0] - pj[None, :, 0]
    dy = pi[:, None, 1] - pj[None, :, 1]
    reach = r_i + r_j
    grid = dx * dx + dy * dy < reach * reach
    if not grid.any():
        return CrossSectionSample(s, grid, None)
    cell = s[1] - s[0]
    rows = np.flatnonzero(grid.any(axis=1))
    cols = np.flatnonzero(grid.any(axis=0))
    rect = (
        (s[rows[0]] - cell, s[rows[-1]] + cell),
        (s[cols[0]] - cell, s[cols[-1]] + cell),
    )
    return CrossSectionSample(s, grid, rect)


def compute_cross_section(
    path_i: PathGeometry,
    path_j: PathGeometry,
    r_i: float,
    r_j: float,
    grid_resolution: int,
    pair: tuple[int, int] = (1, 2),
) -> tuple[Optional[CollisionRect], np.ndarray]:
    """Conservative rectangle covering the sampled collision set of two discs.

    Returns ``(rect, grid)``; ``rect`` is ``None`` when no sample collides.
    """
    sample = sample_cross_section(path_i, path_j, r_i, r_j, grid_resolution)
    if sample.rect is None:
        return None, sample.grid
    (ai, bi), (aj, bj) = sample.rect
    if ai <= 0.0 or aj <= 0.0 or bi >= 1.0 or bj >= 1.0:
        raise ScenarioError(
            f"pair {pair}: collision region {sample.rect} reaches the path ends; "
            "vehicles must be collision-free at s = 0 and s = 1"
        )
    return CollisionRect(pair, (float(ai), float(bi)), (float(aj), float(bj))), sample.grid


def compile_scenario(gs: GeometricScenario, grid_resolution: int = 256) -> CoordinationScenario:
    n = len(gs.vehicles)
    obstacles = []
    for i, j in combinations(range(1, n + 1), 2):
        rect, _ = compute_cross_section(
            gs.path_of(i), gs.path_of(j), gs.radius_of(i), gs.radius_of(j), grid_resolution, (i, j)
        )
        if rect is not None:
            obstacles.append(rect)
    # the scenario constructor rejects a colliding start with InfeasibleInputError
    return CoordinationScenario(n, tuple(obstacles), tuple(gs.initial_positions))


def straight_path(id: int, start: Sequence[float], end: Sequence[float]) -> PathGeometry:
    return PathGeometry(id, (tuple(start), tuple(end)))
