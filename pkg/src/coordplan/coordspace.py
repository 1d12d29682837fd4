"""Coordination space, obstacle cross-sections and the planar sets derived from them.

Every planar set lives in the plane of one collision pair ``(i, j)``: the
first coordinate is ``s_i`` and the second is ``s_j``.  Obstacles are open,
free space is closed, and every derived set is clipped to the unit square.

For an axis-aligned rectangle ``(a_i, b_i) x (a_j, b_j)`` the derived sets
have closed forms and are built directly.  Discs and convex polygons go
through generic membership predicates built from chord queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import InfeasibleInputError, ScenarioError

Point = tuple[float, float]
Interval = tuple[float, float]


class CrossSection:
    """Open bounded convex subset of the unit square.

    Subclasses answer chord queries; the region builders below only rely on
    these methods.
    """

    def contains(self, x: float, y: float) -> bool:
        raise NotImplementedError

    def y_span(self, x: float) -> Optional[Interval]:
        """Open interval of second coordinates on the vertical line at ``x``."""
        raise NotImplementedError

    def min_y_beyond(self, x: float) -> Optional[float]:
        """Infimum of the second coordinate over points with first coordinate > x."""
        raise NotImplementedError

    def transposed(self) -> "CrossSection":
        raise NotImplementedError

    def bounds(self) -> tuple[Interval, Interval]:
        raise NotImplementedError

    def centroid(self) -> Point:
        (x0, x1), (y0, y1) = self.bounds()
        return (0.5 * (x0 + x1), 0.5 * (y0 + y1))

    def outline(self) -> tuple[Point, ...]:
        raise NotImplementedError


@dataclass(frozen=True)
class CollisionRect(CrossSection):
    """Open rectangle ``i_interval x j_interval`` in the plane of ``pair``."""

    pair: tuple[int, int]
    i_interval: Interval
    j_interval: Interval

    def __post_init__(self):
        i, j = self.pair
        if i == j:
            raise ScenarioError(f"obstacle pair {self.pair}: self pair")
        for name, (a, b) in (("i_interval", self.i_interval), ("j_interval", self.j_interval)):
            if not (0.0 < a < b < 1.0):
                raise ScenarioError(
                    f"obstacle {self.pair} {name}={(a, b)}: need 0 < a < b < 1"
                )

    @property
    def i(self) -> int:
        return self.pair[0]

    @property
    def j(self) -> int:
        return self.pair[1]

    def interval(self, vehicle: int) -> Interval:
        if vehicle == self.pair[0]:
            return self.i_interval
        if vehicle == self.pair[1]:
            return self.j_interval
        raise KeyError(vehicle)

    def other(self, vehicle: int) -> int:
        i, j = self.pair
        if vehicle == i:
            return j
        if vehicle == j:
            return i
        raise KeyError(vehicle)

    def contains(self, x, y):
        (ai, bi), (aj, bj) = self.i_interval, self.j_interval
        return ai < x < bi and aj < y < bj

    def y_span(self, x):
        ai, bi = self.i_interval
        return self.j_interval if ai < x < bi else None

    def min_y_beyond(self, x):
        return self.j_interval[0] if x < self.i_interval[1] else None

    def transposed(self):
        return CollisionRect((self.pair[1], self.pair[0]), self.j_interval, self.i_interval)

    def bounds(self):
        return self.i_interval, self.j_interval

    def outline(self):
        return _box_loop(self.i_interval, self.j_interval)


@dataclass(frozen=True)
class Disc(CrossSection):
    """Open disc; the cross-section of two straight orthogonal crossings."""

    center: Point
    radius: float

    def __post_init__(self):
        cx, cy = self.center
        r = self.radius
        if not (r > 0 and 0 < cx - r and cx + r < 1 and 0 < cy - r and cy + r < 1):
            raise ScenarioError(f"disc {self.center}, {r} must lie inside (0,1)^2")

    def contains(self, x, y):
        cx, cy = self.center
        return (x - cx) ** 2 + (y - cy) ** 2 < self.radius**2

    def y_span(self, x):
        cx, cy = self.center
        d2 = self.radius**2 - (x - cx) ** 2
        if d2 <= 0:
            return None
        h = math.sqrt(d2)
        return (cy - h, cy + h)

    def min_y_beyond(self, x):
        cx, cy = self.center
        r = self.radius
        if x < cx:
            return cy - r
        if x < cx + r:
            return cy - math.sqrt(r * r - (x - cx) ** 2)
        return None

    def transposed(self):
        return Disc((self.center[1], self.center[0]), self.radius)

    def bounds(self):
        cx, cy = self.center
        r = self.radius
        return (cx - r, cx + r), (cy - r, cy + r)

    def outline(self):
        cx, cy = self.center
        k = 96
        return tuple(
            (cx + self.radius * math.cos(2 * math.pi * t / k), cy + self.radius * math.sin(2 * math.pi * t / k))
            for t in range(k)
        )


@dataclass(frozen=True)
class ConvexCrossSection(CrossSection):
    """Open interior of a strictly convex polygon given counter-clockwise."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise ScenarioError("convex cross-section needs at least 3 vertices")
        for x, y in verts:
            if not (0 < x < 1 and 0 < y < 1):
                raise ScenarioError(f"vertex {(x, y)} outside (0,1)^2")
        m = len(verts)
        for k in range(m):
            if _cross(verts[k], verts[(k + 1) % m], verts[(k + 2) % m]) <= 0:
                raise ScenarioError("vertices must be strictly convex and counter-clockwise")

    def contains(self, x, y):
        m = len(self.vertices)
        return all(
            _cross(self.vertices[k], self.vertices[(k + 1) % m], (x, y)) > 0 for k in range(m)
        )

    def y_span(self, x):
        (x0, x1), _ = self.bounds()
        if not (x0 < x < x1):
            return None
        ys = []
        m = len(self.vertices)
        for k in range(m):
            (px, py), (qx, qy) = self.vertices[k], self.vertices[(k + 1) % m]
            if (px - x) * (qx - x) <= 0 and px != qx:
                ys.append(py + (x - px) * (qy - py) / (qx - px))
        return (min(ys), max(ys))

    def min_y_beyond(self, x):
        (x0, x1), _ = self.bounds()
        if x >= x1:
            return None
        clipped = _clip_halfplane_x(self.vertices, x)
        return min(y for _, y in clipped)

    def transposed(self):
        return ConvexCrossSection(tuple((y, x) for x, y in reversed(self.vertices)))

    def bounds(self):
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return (min(xs), max(xs)), (min(ys), max(ys))

    def centroid(self):
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return (sum(xs) / len(xs), sum(ys) / len(ys))

    def outline(self):
        return self.vertices

    @classmethod
    def from_rect(cls, rect: CollisionRect) -> "ConvexCrossSection":
        return cls(_box_loop(rect.i_interval, rect.j_interval))


def _cross(o: Point, a: Point, b: Point) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _clip_halfplane_x(verts: Sequence[Point], x: float) -> list[Point]:
    # keep the part with first coordinate >= x
    out = []
    m = len(verts)
    for k in range(m):
        p, q = verts[k], verts[(k + 1) % m]
        p_in, q_in = p[0] >= x, q[0] >= x
        if p_in:
            out.append(p)
        if p_in != q_in:
            s = (x - p[0]) / (q[0] - p[0])
            out.append((x, p[1] + s * (q[1] - p[1])))
    return out


def _box_loop(xi: Interval, yi: Interval) -> tuple[Point, ...]:
    (x0, x1), (y0, y1) = xi, yi
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def _in_unit(x: float, y: float) -> bool:
    return 0.0 <= x <= 1.0 and 0.0 <= y <= 1.0


@dataclass(frozen=True)
class Region2D:
    """Planar set given by a membership predicate plus boundary loops.

    ``loops`` are filled with the even-odd rule.  ``closed_edges`` flags, for
    each loop edge ``k -> k+1``, whether the points on that edge belong to
    the set; it is ``None`` when only the predicate is exact.
    """

    contains: Callable[[float, float], bool]
    loops: tuple[tuple[Point, ...], ...]
    closed_edges: Optional[tuple[tuple[bool, ...], ...]] = None
    name: str = field(default="", compare=False)

    def __call__(self, x: float, y: float) -> bool:
        return self.contains(x, y)

    def transposed(self) -> "Region2D":
        pred = self.contains
        loops = tuple(tuple((y, x) for x, y in loop) for loop in self.loops)
        return Region2D(lambda x, y: pred(y, x), loops, self.closed_edges, self.name)


def _trace_convex(contains, center: Point, k: int = 96) -> tuple[Point, ...]:
    cx, cy = center
    pts = []
    for step in range(k):
        ang = 2 * math.pi * step / k
        dx, dy = math.cos(ang), math.sin(ang)
        rmax = math.inf
        for c, d in ((cx, dx), (cy, dy)):
            if d > 1e-15:
                rmax = min(rmax, (1 - c) / d)
            elif d < -1e-15:
                rmax = min(rmax, -c / d)
        if contains(cx + rmax * dx, cy + rmax * dy):
            r = rmax
        else:
            lo, hi = 0.0, rmax
            for _ in range(50):
                mid = 0.5 * (lo + hi)
                if contains(cx + mid * dx, cy + mid * dy):
                    lo = mid
                else:
                    hi = mid
            r = lo
        pts.append((cx + r * dx, cy + r * dy))
    return tuple(pts)


def region_of(c: CrossSection) -> Region2D:
    if isinstance(c, CollisionRect):
        return Region2D(c.contains, (c.outline(),), ((False,) * 4,), "obstacle")
    return Region2D(c.contains, (tuple(c.outline()),), None, "obstacle")


def south(c: CrossSection) -> Region2D:
    """Sweep ``c`` downwards along the second axis."""
    if isinstance(c, CollisionRect):
        (ai, bi), (aj, bj) = c.i_interval, c.j_interval
        return Region2D(
            lambda x, y: ai < x < bi and 0.0 <= y < bj,
            (_box_loop((ai, bi), (0.0, bj)),),
            ((True, False, False, False),),
            "south",
        )

    def pred(x, y):
        span = c.y_span(x)
        return span is not None and _in_unit(x, y) and y < span[1]

    return Region2D(pred, (_trace_convex(pred, c.centroid()),), None, "south")


def west(c: CrossSection) -> Region2D:
    """Sweep ``c`` leftwards along the first axis."""
    r = south(c.transposed()).transposed()
    return Region2D(r.contains, r.loops, r.closed_edges, "west")


def sw_completion(c: CrossSection) -> Region2D:
    """States from which the pair cannot avoid collision under monotone motion."""
    if isinstance(c, CollisionRect):
        r = region_of(c)
        return Region2D(r.contains, r.loops, r.closed_edges, "sw")
    s, w = south(c), west(c)

    def pred(x, y):
        return s.contains(x, y) and w.contains(x, y)

    return Region2D(pred, (_trace_convex(pred, c.centroid()),), None, "sw")


def gate(c: CrossSection, i_first: bool = True) -> Region2D:
    """Gate crossed when the first-axis vehicle passes first (or the second one)."""
    if isinstance(c, CollisionRect):
        (ai, bi), (aj, bj) = c.i_interval, c.j_interval
        if i_first:
            return Region2D(
                lambda x, y: ai < x < bi and 0.0 <= y <= aj,
                (_box_loop((ai, bi), (0.0, aj)),),
                ((True, False, True, False),),
                "gate_i",
            )
        return Region2D(
            lambda x, y: 0.0 <= x <= ai and aj < y < bj,
            (_box_loop((0.0, ai), (aj, bj)),),
            ((False, True, False, True),),
            "gate_j",
        )
    swept_set = south(c) if i_first else west(c)
    sw = sw_completion(c)

    def pred(x, y):
        return swept_set.contains(x, y) and not sw.contains(x, y)

    return Region2D(pred, swept_set.loops + sw.loops, None, "gate_i" if i_first else "gate_j")


def swept_obstacle(c: CrossSection, i_first: bool = True) -> Region2D:
    """States incompatible with crossing the corresponding gate.

    ``i_first`` sweeps ``c`` down the first axis and up the second one.
    """
    if not i_first:
        r = swept_obstacle(c.transposed(), True).transposed()
        return Region2D(r.contains, r.loops, r.closed_edges, "swept_j")
    if isinstance(c, CollisionRect):
        (ai, bi), (aj, bj) = c.i_interval, c.j_interval
        return Region2D(
            lambda x, y: 0.0 <= x < bi and aj < y <= 1.0,
            (_box_loop((0.0, bi), (aj, 1.0)),),
            ((False, False, True, True),),
            "swept_i",
        )

    def pred(x, y):
        m = c.min_y_beyond(x)
        return m is not None and _in_unit(x, y) and y > m

    return Region2D(pred, (_trace_convex(pred, c.centroid()),), None, "swept_i")


@dataclass(frozen=True)
class CoordinationScenario:
    """Planning instance: vehicle count, obstacle rectangles and the start state.

    The goal is always the all-ones state.
    """

    n: int
    obstacles: tuple[CollisionRect, ...]
    x_init: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(sorted(self.obstacles, key=lambda r: r.pair)))
        object.__setattr__(self, "x_init", tuple(float(v) for v in self.x_init))
        if self.n < 1:
            raise ScenarioError("n must be >= 1")
        if len(self.x_init) != self.n:
            raise ScenarioError(f"x_init has {len(self.x_init)} entries, expected {self.n}")
        if any(not (0.0 <= v <= 1.0) for v in self.x_init):
            raise ScenarioError(f"x_init {self.x_init} outside [0,1]^n")
        seen = set()
        for r in self.obstacles:
            i, j = r.pair
            if not (1 <= i < j <= self.n):
                raise ScenarioError(f"obstacle pair {r.pair}: need 1 <= i < j <= {self.n}")
            if r.pair in seen:
                raise ScenarioError(f"duplicate obstacle for pair {r.pair}")
            seen.add(r.pair)
        if not state_is_free(self, self.x_init):
            raise InfeasibleInputError(f"initial state {self.x_init} lies in an obstacle")

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [r.pair for r in self.obstacles]

    def obstacle(self, i: int, j: int) -> Optional[CollisionRect]:
        key = (min(i, j), max(i, j))
        for r in self.obstacles:
            if r.pair == key:
                return r
        return None


def state_is_free(scn: CoordinationScenario, x: Sequence[float]) -> bool:
    """True when no obstacle contains the pair projection of ``x``."""
    return not any(r.contains(x[r.i - 1], x[r.j - 1]) for r in scn.obstacles)
