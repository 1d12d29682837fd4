"""Trajectory planning in the coordination space.

Under the rectangle model the three projection rules of the left-greedy
construction (stay in the unit cube, keep out of the forbidden gate, slide
along the completed obstacle) reduce to one stop-line rule per oriented
pair: when ``i`` has precedence over ``j``, vehicle ``j`` may not go beyond
``a_j`` while ``s_i < b_i``.  Everything else moves at full speed.  The
event-driven planner below integrates that rule exactly; the time-stepped
:func:`simulate_projection` applies the projections literally and serves as
a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .coordspace import CoordinationScenario
from .errors import DeadlockError, InfeasibleGraphError
from .priority import (
    PriorityGraph,
    complete_orientations,
    extract_priority_graph,
    initial_winner,
    is_feasible,
    require_feasible,
)
from .trajectory import Trajectory, cost

SNAP = 1e-12
HORIZON_PER_VEHICLE = 10.0


@dataclass(frozen=True, eq=False)
class PlanResult:
    trajectory: Trajectory
    graph: PriorityGraph
    exit_times: tuple[float, ...]
    cost: float
    mode: str = "fixed"

    @classmethod
    def build(cls, traj: Trajectory, graph: PriorityGraph, mode: str) -> "PlanResult":
        exits = traj.exit_times()
        return cls(traj, graph, tuple(float(v) for v in exits), float(np.mean(exits)), mode)


def cost_bounds(n: int) -> tuple[float, float]:
    """Lower and upper bound on the optimal cost when starting from the origin.

    The lower bound is the obstacle-free diagonal; the upper one moves the
    vehicles across one after the other.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1.0, (n + 1) / 2.0


def edge_walk(n: int) -> Trajectory:
    """Vehicles cross one after the other from the origin, in index order."""
    states = np.zeros((n + 1, n))
    for k in range(1, n + 1):
        states[k:, k - 1] = 1.0
    return Trajectory(np.arange(n + 1, dtype=float), states)


def _snap_targets(scn: CoordinationScenario) -> list[np.ndarray]:
    targets = [{1.0} for _ in range(scn.n)]
    for r in scn.obstacles:
        targets[r.i - 1].update(r.i_interval)
        targets[r.j - 1].update(r.j_interval)
    return [np.array(sorted(t)) for t in targets]


def _left_greedy(
    scn: CoordinationScenario,
    winners: dict[tuple[int, int], int],
    decide: Optional[Callable[[np.ndarray, dict], None]] = None,
) -> Trajectory:
    """Run every vehicle at full speed subject to the stop-line rule.

    ``winners`` maps a collision pair to the vehicle with precedence.  When
    ``decide`` is given it is called at every event and may add entries;
    undecided pairs then produce an event whenever a vehicle reaches the
    start of its interval.
    """
    n = scn.n
    horizon = HORIZON_PER_VEHICLE * n
    targets = _snap_targets(scn)
    x = np.array(scn.x_init, dtype=float)
    t = 0.0
    times, states = [t], [x.copy()]
    while True:
        if decide is not None:
            decide(x, winners)
        active = x < 1.0
        if not active.any():
            break
        blocked = np.zeros(n, dtype=bool)
        for r in scn.obstacles:
            w = winners.get(r.pair)
            if w is None:
                continue
            l = r.other(w)
            if x[w - 1] < r.interval(w)[1] and x[l - 1] >= r.interval(l)[0]:
                blocked[l - 1] = True
        moving = active & ~blocked
        if not moving.any():
            raise DeadlockError(f"all vehicles blocked at t={t:.6g}", t, x.copy())

        step = float(np.min(1.0 - x[moving]))
        for r in scn.obstacles:
            w = winners.get(r.pair)
            if w is None:
                if decide is not None:
                    for v in r.pair:
                        a = r.interval(v)[0]
                        if moving[v - 1] and x[v - 1] < a:
                            step = min(step, a - x[v - 1])
                continue
            l = r.other(w)
            stop, release = r.interval(l)[0], r.interval(w)[1]
            if x[w - 1] >= release:
                continue
            if moving[l - 1] and x[l - 1] < stop:
                step = min(step, stop - x[l - 1])
            if moving[w - 1] and blocked[l - 1]:
                step = min(step, release - x[w - 1])

        if t + step > horizon:
            raise DeadlockError(f"horizon {horizon:g} s exceeded", t, x.copy())
        x[moving] += step
        t += step
        for v in np.flatnonzero(moving):
            near = targets[v][np.abs(targets[v] - x[v]) < SNAP]
            if len(near):
                x[v] = near[0]
        times.append(t)
        states.append(x.copy())
    return Trajectory(np.array(times), np.array(states))


def _winners(g: PriorityGraph) -> dict[tuple[int, int], int]:
    return {(min(a, b), max(a, b)): a for a, b in g.arcs}


def plan_fixed_priority(scn: CoordinationScenario, g: PriorityGraph) -> PlanResult:
    """Optimal trajectory among those realizing the priority graph ``g``.

    Raises :class:`InfeasibleGraphError` (carrying the witness cycle) when no
    trajectory realizes ``g``.
    """
    require_feasible(g, scn)
    traj = _left_greedy(scn, _winners(g))
    return PlanResult.build(traj, g, "fixed")


def plan_exhaustive(scn: CoordinationScenario) -> PlanResult:
    """Best fixed-priority plan over every feasible priority graph.

    Ties within 1e-12 go to the lexicographically smallest arc list.
    """
    best = None
    for g in complete_orientations(scn):
        if not is_feasible(g, scn):
            continue
        res = PlanResult.build(_left_greedy(scn, _winners(g)), g, "exhaustive")
        if best is None or res.cost < best.cost - 1e-12 or (
            abs(res.cost - best.cost) <= 1e-12 and g.sorted_arcs() < best.graph.sorted_arcs()
        ):
            best = res
    # an acyclic orientation compatible with the start state always exists
    assert best is not None, "no feasible priority graph"
    return best


def plan_heuristic(scn: CoordinationScenario) -> PlanResult:
    """Reactive plan that fixes each priority when a gate is first reached.

    Vehicles run at full speed.  When an undecided pair reaches the start of
    one vehicle's interval, that vehicle gets precedence unless doing so
    closes a deadlocking cycle, in which case the other one does.  A
    simultaneous arrival favours the lower index.
    """
    n = scn.n

    def decide(x, winners):
        for r in scn.obstacles:
            if r.pair in winners:
                continue
            settled = initial_winner(r, x)
            if settled is not None:
                winners[r.pair] = settled
                continue
            (ai, _), (aj, _) = r.i_interval, r.j_interval
            xi, xj = x[r.i - 1], x[r.j - 1]
            if xi >= ai:
                first = r.i
            elif xj >= aj:
                first = r.j
            else:
                continue
            for w in (first, r.other(first)):
                trial = dict(winners)
                trial[r.pair] = w
                arcs = frozenset((v, p[0] + p[1] - v) for p, v in trial.items())
                if is_feasible(PriorityGraph(n, arcs), scn, partial=True):
                    winners[r.pair] = w
                    break
            else:
                raise InfeasibleGraphError(f"no feasible orientation left for pair {r.pair}")

    winners: dict[tuple[int, int], int] = {}
    traj = _left_greedy(scn, winners, decide)
    graph = PriorityGraph(n, frozenset((w, p[0] + p[1] - w) for p, w in winners.items()))
    return PlanResult.build(traj, graph, "heuristic")


def simulate_projection(
    scn: CoordinationScenario,
    g: PriorityGraph,
    dt: float = 1e-3,
    check_feasibility: bool = True,
    tol: float = 1e-12,
) -> Trajectory:
    """Fixed-step integration of the projected velocity field.

    Each step starts from the all-ones velocity and zeroes components that
    have reached 1, then repeatedly projects away the components that would
    enter a forbidden gate or the completed obstacle from its boundary.  A
    component that would cross such a boundary within the step is stopped
    on it.  With ``check_feasibility`` off, infeasible graphs run until they
    stall and raise :class:`DeadlockError`.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if check_feasibility:
        require_feasible(g, scn)
    n = scn.n
    horizon = HORIZON_PER_VEHICLE * n
    oriented = []
    for w, l in g.sorted_arcs():
        r = scn.obstacle(w, l)
        oriented.append((w - 1, l - 1, r.interval(w), r.interval(l)))

    x = np.array(scn.x_init, dtype=float)
    t = 0.0
    times, states = [t], [x.copy()]
    while np.any(x < 1.0):
        v = np.ones(n)
        v[x >= 1.0] = 0.0
        changed = True
        while changed:
            changed = False
            for w, l, (aw, bw), (al, bl) in oriented:
                on_stop_line = abs(x[l] - al) <= tol
                # boundary of the forbidden gate: s_l = a_l with s_w <= a_w
                if on_stop_line and x[w] <= aw + tol and v[l] > 0:
                    v[l] = 0.0
                    changed = True
                # lower face of the obstacle, where the all-ones field points inwards
                if on_stop_line and aw < x[w] < bw and v[l] > 0:
                    v[l] = 0.0
                    changed = True
                if abs(x[w] - aw) <= tol and al < x[l] < bl and v[w] > 0:
                    v[w] = 0.0
                    changed = True
        if not v.any():
            raise DeadlockError(f"projection stalled at t={t:.6g}", t, x.copy())
        new = np.minimum(x + v * dt, 1.0)
        for w, l, (aw, bw), (al, bl) in oriented:
            if x[w] < bw and x[l] < al:
                new[l] = min(new[l], al)
        t += dt
        if t > horizon:
            raise DeadlockError(f"horizon {horizon:g} s exceeded", t, x.copy())
        x = new
        times.append(t)
        states.append(x.copy())
    return Trajectory(np.array(times), np.array(states))


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[str]:
        return self.violations[0] if self.violations else None

    def __bool__(self):
        return self.ok


def _segment_enters_rect(p, q, xr, yr, eps) -> Optional[np.ndarray]:
    """A point of segment ``p -> q`` inside the open box shrunk by ``eps``, if any."""
    tlo, thi = 0.0, 1.0
    for axis, (lo, hi) in enumerate((xr, yr)):
        lo, hi = lo + eps, hi - eps
        d = q[axis] - p[axis]
        if d == 0.0:
            if not (lo < p[axis] < hi):
                return None
            continue
        t0, t1 = sorted(((lo - p[axis]) / d, (hi - p[axis]) / d))
        tlo, thi = max(tlo, t0), min(thi, t1)
    if tlo < thi:
        tm = 0.5 * (tlo + thi)
        return p + tm * (q - p)
    return None


def validate(
    traj: Trajectory,
    scn: CoordinationScenario,
    graph: Optional[PriorityGraph] = None,
    density: int = 16,
    tol: float = 1e-9,
) -> ValidationReport:
    """Check a trajectory against the feasibility conditions of the scenario.

    Collisions are tested exactly per segment and also at ``density``
    samples per segment; ``graph``, when given, must equal the extracted
    priority graph.
    """
    rep = ValidationReport()
    if traj.n != scn.n:
        rep.violations.append(f"trajectory has {traj.n} components, scenario {scn.n}")
        return rep
    x, t = traj.states, traj.times
    if np.max(np.abs(x[0] - np.array(scn.x_init))) > tol:
        rep.violations.append(f"start {x[0].tolist()} != x_init {list(scn.x_init)}")
    if np.max(np.abs(x[-1] - 1.0)) > tol:
        rep.violations.append(f"goal not reached: final state {x[-1].tolist()}")
    dx = np.diff(x, axis=0)
    dt = np.diff(t)
    for k in range(len(dt)):
        if np.any(dx[k] < -tol):
            rep.violations.append(f"non-monotone segment {k} at t={t[k]:.6g}")
        elif np.any(dx[k] > dt[k] * (1.0 + tol) + tol):
            slope = float(np.max(dx[k] / dt[k]))
            rep.violations.append(f"speed bound violated on segment {k}: slope {slope:.6g}")
    for r in scn.obstacles:
        pts = traj.pair_path(r.i, r.j)
        for k in range(len(pts) - 1):
            hit = _segment_enters_rect(pts[k], pts[k + 1], r.i_interval, r.j_interval, tol)
            if hit is None:
                s = np.linspace(0.0, 1.0, density + 1)[:, None]
                probe = pts[k] + s * (pts[k + 1] - pts[k])
                # same margin as the exact test so rounding at a stop line is not a hit
                (ai, bi), (aj, bj) = r.i_interval, r.j_interval
                inside = [
                    p for p in probe
                    if ai + tol < p[0] < bi - tol and aj + tol < p[1] < bj - tol
                ]
                hit = inside[0] if inside else None
            if hit is not None:
                rep.violations.append(
                    f"collision on pair {r.pair} at ({hit[0]:.6g}, {hit[1]:.6g}), segment {k}"
                )
                break
    if graph is not None and rep.ok:
        try:
            realized = extract_priority_graph(traj, scn)
        except Exception as exc:  # invariant violations surface as report entries
            rep.violations.append(f"gate check failed: {exc}")
        else:
            if realized != graph:
                rep.violations.append(f"realized priorities {realized} differ from {graph}")
    return rep


__all__ = [
    "PlanResult",
    "ValidationReport",
    "cost",
    "cost_bounds",
    "edge_walk",
    "plan_exhaustive",
    "plan_fixed_priority",
    "plan_heuristic",
    "simulate_projection",
    "validate",
]
