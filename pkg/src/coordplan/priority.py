"""Priority graphs over collision pairs and their feasibility."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional, Sequence

import networkx as nx
import numpy as np

from .coordspace import CollisionRect, CoordinationScenario
from .errors import CoordinationError, GuardError, InfeasibleGraphError

MAX_ORIENTED_PAIRS = 20
MAX_CYCLE_VERTICES = 10
GATE_EPS = 1e-9

Arc = tuple[int, int]


@dataclass(frozen=True)
class PriorityGraph:
    """Orientation of collision pairs; the arc ``(i, j)`` means i passes before j."""

    n: int
    arcs: frozenset[Arc] = frozenset()

    def __post_init__(self):
        arcs = frozenset((int(a), int(b)) for a, b in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        seen = set()
        for a, b in arcs:
            if a == b:
                raise ValueError(f"self arc {a}>{b}")
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ValueError(f"arc {a}>{b} outside vehicles 1..{self.n}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError(f"pair {key} oriented twice")
            seen.add(key)

    @classmethod
    def parse(cls, n: int, text: str) -> "PriorityGraph":
        """Parse the ``"1>2,2>3"`` literal."""
        arcs = []
        for item in text.replace(" ", "").split(","):
            if not item:
                continue
            try:
                a, b = item.split(">")
                arcs.append((int(a), int(b)))
            except ValueError:
                raise ValueError(f"bad priority literal {item!r}; expected 'i>j'") from None
        return cls(n, frozenset(arcs))

    def __str__(self):
        return ",".join(f"{a}>{b}" for a, b in self.sorted_arcs())

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs)

    def winner(self, i: int, j: int) -> Optional[int]:
        if (i, j) in self.arcs:
            return i
        if (j, i) in self.arcs:
            return j
        return None

    def with_arc(self, a: int, b: int) -> "PriorityGraph":
        return PriorityGraph(self.n, self.arcs | {(a, b)})

    def pairs(self) -> set[tuple[int, int]]:
        return {(min(a, b), max(a, b)) for a, b in self.arcs}

    def is_complete_for(self, scn: CoordinationScenario) -> bool:
        return self.n == scn.n and self.pairs() == set(scn.pairs)

    def digraph(self, arcs=None) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(1, self.n + 1))
        g.add_edges_from(self.arcs if arcs is None else arcs)
        return g


def complete_orientations(scn: CoordinationScenario) -> Iterator[PriorityGraph]:
    """Every orientation of the scenario's collision pairs."""
    pairs = scn.pairs
    if len(pairs) > MAX_ORIENTED_PAIRS:
        raise GuardError(f"{len(pairs)} collision pairs; refusing to enumerate 2^{len(pairs)} graphs")
    choices = [((i, j), (j, i)) for i, j in pairs]
    for combo in product(*choices):
        yield PriorityGraph(scn.n, frozenset(combo))


def _canonical(cycle: Sequence[int]) -> tuple[int, ...]:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:]) + tuple(cycle[:k])


def simple_cycles(g: PriorityGraph, arcs=None) -> list[tuple[int, ...]]:
    """Elementary directed cycles, each rotated to start at its smallest vertex."""
    if g.n > MAX_CYCLE_VERTICES:
        raise GuardError(f"cycle enumeration refused above {MAX_CYCLE_VERTICES} vehicles")
    return sorted(_canonical(c) for c in nx.simple_cycles(g.digraph(arcs)))


def initial_winner(rect: CollisionRect, x: Sequence[float]) -> Optional[int]:
    """Vehicle whose precedence is already settled by the state ``x``, if any.

    A vehicle that has cleared its interval, or is inside its interval while
    the other has not entered, keeps precedence on every monotone motion.
    """
    (ai, bi), (aj, bj) = rect.i_interval, rect.j_interval
    xi, xj = x[rect.i - 1], x[rect.j - 1]
    if xi >= bi:
        return rect.i
    if xj >= bj:
        return rect.j
    if xi > ai and xj <= aj:
        return rect.i
    if xj > aj and xi <= ai:
        return rect.j
    return None


def _pending_arcs(g: PriorityGraph, scn: CoordinationScenario) -> list[Arc]:
    # an arc stops constraining anything once its winner has cleared the interval
    out = []
    for a, b in g.arcs:
        rect = scn.obstacle(a, b)
        if scn.x_init[a - 1] < rect.interval(a)[1]:
            out.append((a, b))
    return out


def swept_cycle_box(
    cycle: Sequence[int], scn: CoordinationScenario
) -> Optional[dict[int, tuple[float, float]]]:
    """Intersection of the swept obstacles along ``cycle`` as a box, or None if empty.

    Each vertex ``v`` on the cycle, entered from ``u`` and left towards
    ``w``, contributes the open interval ``(a_v of {u,v}, b_v of {v,w})``.
    """
    box = {}
    k = len(cycle)
    for idx, v in enumerate(cycle):
        u, w = cycle[idx - 1], cycle[(idx + 1) % k]
        lo = scn.obstacle(u, v).interval(v)[0]
        hi = scn.obstacle(v, w).interval(v)[1]
        if not lo < hi:
            return None
        box[v] = (lo, hi)
    return box


def raw_cycle_box(
    cycle: Sequence[int], scn: CoordinationScenario
) -> Optional[dict[int, tuple[float, float]]]:
    """Intersection of the plain obstacle cylinders along ``cycle``, or None if empty."""
    box = {}
    k = len(cycle)
    for idx, v in enumerate(cycle):
        u, w = cycle[idx - 1], cycle[(idx + 1) % k]
        a1, b1 = scn.obstacle(u, v).interval(v)
        a2, b2 = scn.obstacle(v, w).interval(v)
        lo, hi = max(a1, a2), min(b1, b2)
        if not lo < hi:
            return None
        box[v] = (lo, hi)
    return box


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    cycle: Optional[tuple[int, ...]] = None
    box: Optional[dict] = None
    reason: str = ""

    def __bool__(self):
        return self.feasible


def _check_graph(g: PriorityGraph, scn: CoordinationScenario, partial: bool):
    if g.n != scn.n:
        raise ValueError(f"graph has n={g.n}, scenario n={scn.n}")
    extra = g.pairs() - set(scn.pairs)
    if extra:
        raise ValueError(f"arcs on pairs without an obstacle: {sorted(extra)}")
    if not partial and not g.is_complete_for(scn):
        missing = sorted(set(scn.pairs) - g.pairs())
        raise ValueError(f"priority graph is incomplete; unoriented pairs {missing}")


def is_feasible(g: PriorityGraph, scn: CoordinationScenario, partial: bool = False) -> Feasibility:
    """Decide whether some feasible trajectory realizes ``g``.

    A graph is rejected when some cycle of still-binding arcs has a
    non-empty intersection of swept obstacles, or when it contradicts a
    precedence already settled by the initial state.  ``partial`` allows
    graphs that leave some collision pairs unoriented.
    """
    _check_graph(g, scn, partial)
    for rect in scn.obstacles:
        settled = initial_winner(rect, scn.x_init)
        chosen = g.winner(*rect.pair)
        if settled is not None and chosen is not None and chosen != settled:
            return Feasibility(
                False, reason=f"vehicle {settled} already has precedence on pair {rect.pair}"
            )
    for cycle in simple_cycles(g, _pending_arcs(g, scn)):
        box = swept_cycle_box(cycle, scn)
        if box is not None:
            return Feasibility(False, cycle, box, f"cycle {cycle} can deadlock")
    return Feasibility(True)


def necessary_condition(g: PriorityGraph, scn: CoordinationScenario) -> bool:
    """Cheaper filter: no cycle of binding arcs may share a common collision state."""
    _check_graph(g, scn, partial=True)
    return all(raw_cycle_box(c, scn) is None for c in simple_cycles(g, _pending_arcs(g, scn)))


def _segment_meets_box(p, q, xr, yr) -> bool:
    tlo, thi = 0.0, 1.0
    for axis, (lo, hi) in enumerate((xr, yr)):
        d = q[axis] - p[axis]
        if d == 0.0:
            if not (lo <= p[axis] <= hi):
                return False
            continue
        t0, t1 = (lo - p[axis]) / d, (hi - p[axis]) / d
        if t0 > t1:
            t0, t1 = t1, t0
        tlo, thi = max(tlo, t0), min(thi, t1)
        if tlo > thi:
            return False
    return True


def path_meets_gate(points: np.ndarray, rect: CollisionRect, i_first: bool) -> bool:
    """Whether a polyline in the pair plane touches the gate of one vehicle.

    Open gate edges are shrunk and closed ones grown by a small tolerance so
    that exact stop-line waits register.
    """
    (ai, bi), (aj, bj) = rect.i_interval, rect.j_interval
    e = GATE_EPS
    if i_first:
        xr, yr = (ai + e, bi - e), (-e, aj + e)
    else:
        xr, yr = (-e, ai + e), (aj + e, bj - e)
    if len(points) == 1:
        return _segment_meets_box(points[0], points[0], xr, yr)
    return any(_segment_meets_box(points[k], points[k + 1], xr, yr) for k in range(len(points) - 1))


def extract_priority_graph(traj, scn: CoordinationScenario) -> PriorityGraph:
    """Priority graph realized by ``traj``: which gate it crosses for every pair."""
    arcs = []
    for rect in scn.obstacles:
        pts = traj.pair_path(rect.i, rect.j)
        hit_i = path_meets_gate(pts, rect, True)
        hit_j = path_meets_gate(pts, rect, False)
        if hit_i and hit_j:
            raise CoordinationError(f"trajectory crosses both gates of pair {rect.pair}")
        if hit_i:
            w = rect.i
        elif hit_j:
            w = rect.j
        else:
            w = initial_winner(rect, traj.states[0])
            if w is None:
                raise CoordinationError(f"trajectory crosses no gate of pair {rect.pair}")
        arcs.append((w, rect.other(w)))
    return PriorityGraph(scn.n, frozenset(arcs))


def acyclic_graphs(scn: CoordinationScenario) -> Iterator[PriorityGraph]:
    for g in complete_orientations(scn):
        if nx.is_directed_acyclic_graph(g.digraph()):
            yield g


def require_feasible(g: PriorityGraph, scn: CoordinationScenario) -> Feasibility:
    res = is_feasible(g, scn)
    if not res:
        raise InfeasibleGraphError(f"priority graph {g} is infeasible: {res.reason}", res.cycle)
    return res

