"""Hand-written SVG figures: one per collision pair plus a time-space chart.

Output depends only on the inputs, so files are byte-stable across runs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from .coordspace import CollisionRect, CoordinationScenario, gate
from .priority import PriorityGraph
from .trajectory import Trajectory

OBSTACLE = "#3b6fd8"
FORBIDDEN = "#d83b3b"
PALETTE = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"]

SIZE = 320
MARGIN = 36


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _header(width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]


def pair_svg(rect: CollisionRect, traj: Trajectory, graph: PriorityGraph) -> str:
    """Pair plane with obstacle, forbidden gate, allowed gate and the projected path."""
    span = SIZE - 2 * MARGIN

    def px(x, y):
        return MARGIN + x * span, SIZE - MARGIN - y * span

    def poly(loop, **attrs):
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (px(*p) for p in loop))
        extra = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        return f'<polygon points="{pts}" {extra}/>'

    i, j = rect.pair
    winner = graph.winner(i, j)
    allowed = gate(rect, i_first=winner == i)
    forbidden = gate(rect, i_first=winner != i)
    out = _header(SIZE, SIZE)
    out.append(poly(((0, 0), (1, 0), (1, 1), (0, 1)), fill="none", stroke="black"))
    out.append(poly(forbidden.loops[0], fill=FORBIDDEN, fill_opacity="0.55", stroke="none"))
    out.append(poly(allowed.loops[0], fill="none", stroke=FORBIDDEN, stroke_dasharray="4 3"))
    out.append(poly(rect.outline(), fill=OBSTACLE, fill_opacity="0.8", stroke="none"))
    path = traj.pair_path(i, j)
    pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (px(*p) for p in path))
    out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="2"/>')
    out.append(f'<text x="{_fmt(SIZE / 2)}" y="{_fmt(SIZE - 10)}" text-anchor="middle">s_{i}</text>')
    out.append(f'<text x="12" y="{_fmt(SIZE / 2)}" text-anchor="middle">s_{j}</text>')
    label = f"{winner} &#8827; {rect.other(winner)}" if winner is not None else "no priority"
    out.append(f'<text x="{_fmt(SIZE / 2)}" y="20" text-anchor="middle">pair ({i}, {j}): {label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def time_space_svg(traj: Trajectory) -> str:
    """Curves ``s_v(t)`` for every vehicle."""
    width, height = 480, SIZE
    t_end = float(traj.times[-1]) or 1.0
    sx = (width - 2 * MARGIN) / t_end
    sy = height - 2 * MARGIN
    out = _header(width, height)
    out.append(
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{width - 2 * MARGIN}" height="{sy}" '
        'fill="none" stroke="black"/>'
    )
    for v in range(traj.n):
        color = PALETTE[v % len(PALETTE)]
        pts = " ".join(
            f"{_fmt(MARGIN + t * sx)},{_fmt(height - MARGIN - s * sy)}"
            for t, s in zip(traj.times, traj.states[:, v])
        )
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text x="{width - MARGIN + 4}" y="{MARGIN + 14 * (v + 1)}" fill="{color}">s_{v + 1}</text>'
        )
    out.append(f'<text x="{_fmt(width / 2)}" y="{height - 10}" text-anchor="middle">t (0 to {t_end:.3f})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_plots(
    scn: CoordinationScenario, traj: Trajectory, graph: PriorityGraph, out_dir: Union[str, Path]
) -> list[Path]:
    if traj.n != scn.n or graph.n != scn.n:
        raise ValueError(f"plan has n={traj.n}, scenario n={scn.n}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for rect in scn.obstacles:
        p = out / f"pair_{rect.i}_{rect.j}.svg"
        p.write_text(pair_svg(rect, traj, graph), encoding="utf-8")
        written.append(p)
    p = out / "time_space.svg"
    p.write_text(time_space_svg(traj), encoding="utf-8")
    written.append(p)
    return written
