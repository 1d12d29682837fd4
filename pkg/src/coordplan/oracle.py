"""Brute-force references used to check the planners.

:func:`dp_optimal_cost` searches every monotone lattice trajectory and
shares no code with the planners.  :func:`sample_feasible_trajectory` draws
random trajectories that respect a fixed priority graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coordspace import CollisionRect, CoordinationScenario
from .errors import DeadlockError, GuardError
from .priority import PriorityGraph, require_feasible
from .trajectory import Trajectory

MAX_DP_VEHICLES = 3
MAX_DP_STATES = 2_000_000


@dataclass(frozen=True)
class LatticeConfig:
    grid_step: float = 0.02

    def __post_init__(self):
        g = self.grid_step
        if not (0.0 < g <= 0.1):
            raise ValueError("grid_step must lie in (0, 0.1]")
        if abs(1.0 / g - round(1.0 / g)) > 1e-9:
            raise ValueError("1 / grid_step must be an integer")

    @property
    def time_step(self) -> float:
        return self.grid_step

    @property
    def cells(self) -> int:
        return int(round(1.0 / self.grid_step))


def dp_optimal_cost(scn: CoordinationScenario, cfg: LatticeConfig = LatticeConfig()) -> float:
    """Minimal mean exit time over monotone lattice trajectories.

    Each step every unfinished vehicle advances by zero or one cell (not all
    zero) and costs one time step per unfinished vehicle.  Obstacles are
    shrunk by one cell on every side so lattice points on or next to a
    boundary stay free.
    """
    n = scn.n
    N = cfg.cells
    h = cfg.grid_step
    if n > MAX_DP_VEHICLES or (N + 1) ** n > MAX_DP_STATES:
        raise GuardError(f"lattice with {(N + 1) ** n} states for n={n} exceeds the oracle guard")

    shape = (N + 1,) * n
    K = np.indices(shape).reshape(n, -1).T
    pos = K * h
    forbidden = np.zeros(len(K), dtype=bool)
    for r in scn.obstacles:
        (ai, bi), (aj, bj) = r.i_interval, r.j_interval
        xi, xj = pos[:, r.i - 1], pos[:, r.j - 1]
        forbidden |= (ai + h < xi) & (xi < bi - h) & (aj + h < xj) & (xj < bj - h)

    strides = np.array([(N + 1) ** (n - 1 - d) for d in range(n)])
    flat = K @ strides
    unfinished = (K < N).sum(axis=1)
    level = K.sum(axis=1)
    J = np.full(len(K), np.inf)
    goal = flat[-1]
    J[goal] = 0.0

    moves = [np.array(m) for m in itertools.product((0, 1), repeat=n) if any(m)]
    order = np.argsort(-level, kind="stable")
    levels = level[order]
    bounds = np.flatnonzero(np.diff(levels)) + 1
    for idx in np.split(order, bounds):
        idx = idx[(idx != goal) & ~forbidden[idx]]
        if len(idx) == 0:
            continue
        best = np.full(len(idx), np.inf)
        for m in moves:
            nxt = K[idx] + m
            ok = np.all(nxt <= N, axis=1)
            cand = np.full(len(idx), np.inf)
            cand[ok] = J[flat[idx[ok]] + m @ strides]
            np.minimum(best, cand, out=best)
        J[idx] = unfinished[idx] + best

    start = np.rint(np.asarray(scn.x_init) / h).astype(int)
    value = J[int(start @ strides)]
    if not np.isfinite(value):
        raise DeadlockError("goal unreachable on the lattice")
    # J counts vehicle-steps exactly; one step lasts 1/N
    return float(value) / (N * n)


def sample_feasible_trajectory(
    scn: CoordinationScenario,
    g: PriorityGraph,
    seed: int,
    greedy: bool = False,
    wait_probability: float = 0.2,
    max_segment: float = 0.3,
    max_segments: int = 100_000,
) -> Trajectory:
    """Random trajectory realizing ``g``.

    Every segment draws a speed in [0, 1] per free vehicle (zero with
    probability ``wait_probability``) and a random duration, truncated at the
    next stop line, release or exit.  ``greedy`` forces unit speeds and
    event-length segments, which reproduces the left-greedy plan.
    """
    require_feasible(g, scn)
    rng = np.random.default_rng(seed)
    n = scn.n
    arcs = []
    for w, l in g.sorted_arcs():
        r = scn.obstacle(w, l)
        arcs.append((w - 1, l - 1, r.interval(l)[0], r.interval(w)[1]))
    x = np.array(scn.x_init, dtype=float)
    t = 0.0
    times, states = [t], [x.copy()]
    for _ in range(max_segments):
        active = x < 1.0
        if not active.any():
            return Trajectory(np.array(times), np.array(states))
        free = active.copy()
        for w, l, stop, release in arcs:
            if x[w] < release and x[l] >= stop:
                free[l] = False
        if not free.any():
            raise DeadlockError("sampled trajectory blocked", t, x.copy())
        if greedy:
            speed = free.astype(float)
            span = np.inf
        else:
            speed = np.where(free, rng.uniform(0.0, 1.0, n), 0.0)
            speed[rng.uniform(size=n) < wait_probability] = 0.0
            span = rng.uniform(0.01, max_segment)
        run = speed > 0
        for v in np.flatnonzero(run):
            span = min(span, (1.0 - x[v]) / speed[v])
        for w, l, stop, release in arcs:
            if x[w] >= release:
                continue
            if run[l] and x[l] < stop:
                span = min(span, (stop - x[l]) / speed[l])
            if run[w]:
                span = min(span, (release - x[w]) / speed[w])
        x = x + speed * span
        for w, l, stop, release in arcs:
            if abs(x[l] - stop) < 1e-12:
                x[l] = stop
            if abs(x[w] - release) < 1e-12:
                x[w] = release
        x[np.abs(x - 1.0) < 1e-12] = 1.0
        x = np.minimum(x, 1.0)
        t += span
        times.append(t)
        states.append(x.copy())
    raise GuardError("sampler did not finish within the segment budget")


def random_rect_scenario(
    seed: int,
    n: int,
    conflict_probability: float = 0.8,
    x_init: Optional[tuple[float, ...]] = None,
) -> CoordinationScenario:
    """Random rectangle obstacles for ``n`` vehicles, starting at the origin by default."""
    rng = np.random.default_rng(seed)
    obstacles = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        if rng.uniform() >= conflict_probability:
            continue
        # keep the two intervals close so the obstacle tends to sit on the diagonal
        a_i = rng.uniform(0.1, 0.7)
        a_j = float(np.clip(a_i + rng.uniform(-0.15, 0.15), 0.05, 0.75))
        spans = [(round(a, 4), round(a + rng.uniform(0.05, 0.2), 4)) for a in (a_i, a_j)]
        obstacles.append(CollisionRect((i, j), spans[0], spans[1]))
    return CoordinationScenario(n, tuple(obstacles), x_init or (0.0,) * n)
