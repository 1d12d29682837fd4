"""Scenario and plan files (JSON) and trajectory tables (CSV).

A scenario file holds exactly one top-level key, ``"geometric"`` or
``"abstract"``::

    {"geometric": {"paths": [{"id": 1, "waypoints": [[0, 5], [10, 5]]}, ...],
                   "vehicles": [{"id": 1, "path_id": 1, "radius": 0.5,
                                 "initial_s": 0.0}, ...]}}

    {"abstract": {"n": 2,
                  "obstacles": [{"pair": [1, 2], "i_interval": [0.4, 0.6],
                                 "j_interval": [0.4, 0.6]}],
                  "x_init": [0, 0]}}
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from .coordspace import CollisionRect, CoordinationScenario
from .errors import ScenarioError
from .geometry import GeometricScenario, PathGeometry, VehicleSpec, compile_scenario
from .planner import PlanResult, cost_bounds
from .priority import PriorityGraph
from .trajectory import Trajectory

PLAN_FORMAT = "coordplan.plan/1"


def _read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _get(obj: Any, key: str, where: str, kind=None):
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object")
    if key not in obj:
        raise ScenarioError(f"{where}.{key}: missing field")
    value = obj[key]
    if kind is not None and not _is_kind(value, kind):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ScenarioError(f"{where}.{key}: expected {name}, got {type(value).__name__}")
    return value


def _is_kind(value, kind) -> bool:
    kinds = kind if isinstance(kind, tuple) else (kind,)
    if isinstance(value, bool):
        return bool in kinds
    if float in kinds and isinstance(value, int):
        return True
    return isinstance(value, kinds)


def _number_list(value, where: str, length=None) -> list[float]:
    if not isinstance(value, list) or not all(_is_kind(v, float) for v in value):
        raise ScenarioError(f"{where}: expected a list of numbers")
    if length is not None and len(value) != length:
        raise ScenarioError(f"{where}: expected {length} numbers, got {len(value)}")
    return [float(v) for v in value]


def parse_geometric(body: Any, where: str = "geometric") -> GeometricScenario:
    paths = []
    for k, p in enumerate(_get(body, "paths", where, list)):
        w = f"{where}.paths[{k}]"
        pts = _get(p, "waypoints", w, list)
        wps = [tuple(_number_list(q, f"{w}.waypoints[{m}]", 2)) for m, q in enumerate(pts)]
        try:
            paths.append(PathGeometry(_get(p, "id", w, int), tuple(wps)))
        except ScenarioError as exc:
            raise ScenarioError(f"{w}: {exc}") from None
    vehicles, initial = [], []
    for k, v in enumerate(_get(body, "vehicles", where, list)):
        w = f"{where}.vehicles[{k}]"
        radius = float(_get(v, "radius", w, float))
        if radius <= 0:
            raise ScenarioError(f"{w}.radius: must be > 0")
        vehicles.append(VehicleSpec(_get(v, "id", w, int), _get(v, "path_id", w, int), radius))
        initial.append((vehicles[-1].id, float(v.get("initial_s", 0.0))))
    initial.sort()
    try:
        return GeometricScenario(tuple(paths), tuple(vehicles), tuple(s for _, s in initial))
    except ScenarioError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def parse_abstract(body: Any, where: str = "abstract") -> CoordinationScenario:
    n = _get(body, "n", where, int)
    rects = []
    for k, o in enumerate(_get(body, "obstacles", where, list)):
        w = f"{where}.obstacles[{k}]"
        pair = _get(o, "pair", w, list)
        if len(pair) != 2 or not all(_is_kind(v, int) for v in pair):
            raise ScenarioError(f"{w}.pair: expected two vehicle ids")
        ii = _number_list(_get(o, "i_interval", w), f"{w}.i_interval", 2)
        jj = _number_list(_get(o, "j_interval", w), f"{w}.j_interval", 2)
        i, j = pair
        if i > j:
            i, j, ii, jj = j, i, jj, ii
        try:
            rects.append(CollisionRect((i, j), tuple(ii), tuple(jj)))
        except ScenarioError as exc:
            raise ScenarioError(f"{w}: {exc}") from None
    x_init = _number_list(body.get("x_init", [0.0] * n), f"{where}.x_init", n)
    try:
        return CoordinationScenario(n, tuple(rects), tuple(x_init))
    except ScenarioError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def load_scenario_file(path: Union[str, Path]) -> tuple[str, Any]:
    """Return ``("geometric", GeometricScenario)`` or ``("abstract", CoordinationScenario)``."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: top level must be an object")
    forms = [k for k in ("geometric", "abstract") if k in data]
    if len(forms) != 1:
        raise ScenarioError(f"{path}: expected exactly one of 'geometric' or 'abstract'")
    if forms[0] == "geometric":
        return "geometric", parse_geometric(data["geometric"])
    return "abstract", parse_abstract(data["abstract"])


def load_coordination(path: Union[str, Path], grid_resolution: int = 256) -> CoordinationScenario:
    kind, obj = load_scenario_file(path)
    return compile_scenario(obj, grid_resolution) if kind == "geometric" else obj


def abstract_dict(scn: CoordinationScenario) -> dict:
    return {
        "abstract": {
            "n": scn.n,
            "obstacles": [
                {"pair": list(r.pair), "i_interval": list(r.i_interval), "j_interval": list(r.j_interval)}
                for r in scn.obstacles
            ],
            "x_init": list(scn.x_init),
        }
    }


def write_json(path: Union[str, Path], payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def plan_dict(res: PlanResult, scn: CoordinationScenario) -> dict:
    lower, upper = cost_bounds(scn.n)
    traj = res.trajectory
    return {
        "format": PLAN_FORMAT,
        "mode": res.mode,
        "n": scn.n,
        "cost": res.cost,
        "exit_times": list(res.exit_times),
        "graph": [list(a) for a in res.graph.sorted_arcs()],
        "bounds": {"lower": lower, "upper": upper, "from_origin": all(v == 0 for v in scn.x_init)},
        "breakpoints": [
            {"t": float(t), "x": [float(v) for v in x]} for t, x in zip(traj.times, traj.states)
        ],
    }


def read_plan(path: Union[str, Path]) -> tuple[Trajectory, PriorityGraph, dict]:
    data = _read_json(path)
    where = str(path)
    if not isinstance(data, dict) or data.get("format") != PLAN_FORMAT:
        raise ScenarioError(f"{where}: not a {PLAN_FORMAT} file")
    n = _get(data, "n", where, int)
    bps = _get(data, "breakpoints", where, list)
    times = [float(_get(b, "t", f"{where}.breakpoints[{k}]", float)) for k, b in enumerate(bps)]
    states = [_number_list(_get(b, "x", f"{where}.breakpoints[{k}]"), f"breakpoints[{k}].x", n)
              for k, b in enumerate(bps)]
    arcs = [tuple(a) for a in _get(data, "graph", where, list)]
    return Trajectory(np.array(times), np.array(states)), PriorityGraph(n, frozenset(arcs)), data


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"s_{v}" for v in range(1, traj.n + 1)])
    for t, x in zip(traj.times, traj.states):
        w.writerow([repr(float(t))] + [repr(float(v)) for v in x])
    return buf.getvalue()


def read_trajectory_csv(path: Union[str, Path]) -> Trajectory:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    return Trajectory(data[:, 0], data[:, 1:])
