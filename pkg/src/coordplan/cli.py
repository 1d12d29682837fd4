"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 infeasible priority graph,
3 guard violation (deadlock, horizon, combinatorial limit, failed verify).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import GuardError, InfeasibleGraphError, ScenarioError
from .files import (
    abstract_dict,
    load_coordination,
    load_scenario_file,
    plan_dict,
    read_plan,
    trajectory_csv,
    write_json,
)
from .geometry import compile_scenario
from .oracle import LatticeConfig, dp_optimal_cost, random_rect_scenario, sample_feasible_trajectory
from .planner import plan_exhaustive, plan_fixed_priority, plan_heuristic, validate
from .priority import PriorityGraph, complete_orientations, is_feasible
from .svg import write_plots
from .trajectory import cost

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_GUARD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def cmd_compile(args) -> int:
    kind, obj = load_scenario_file(args.input)
    if kind != "geometric":
        raise ScenarioError(f"{args.input}: compile expects a geometric scenario")
    scn = compile_scenario(obj, args.grid)
    out = Path(args.out) if args.out else Path(args.input).with_suffix(".abstract.json")
    write_json(out, abstract_dict(scn))
    print(f"{len(scn.obstacles)} collision pair(s) -> {out}")
    for r in scn.obstacles:
        print(f"  {r.i},{r.j}: s_{r.i} in ({r.i_interval[0]:.4f}, {r.i_interval[1]:.4f}), "
              f"s_{r.j} in ({r.j_interval[0]:.4f}, {r.j_interval[1]:.4f})")
    return EXIT_OK


def cmd_plan(args) -> int:
    scn = load_coordination(args.input, args.grid)
    if args.mode == "fixed":
        if not args.graph:
            raise _UsageError("--graph is required with --mode fixed")
        try:
            g = PriorityGraph.parse(scn.n, args.graph)
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
        res = plan_fixed_priority(scn, g)
    elif args.graph:
        raise _UsageError("--graph is only accepted with --mode fixed")
    elif args.mode == "heuristic":
        res = plan_heuristic(scn)
    else:
        res = plan_exhaustive(scn)
    if args.out:
        write_json(args.out, plan_dict(res, scn))
    if args.csv:
        Path(args.csv).write_text(trajectory_csv(res.trajectory), encoding="utf-8")
    print(f"mode={res.mode} cost={res.cost:.12g} graph={res.graph or '(empty)'}")
    print("exit_times=" + ",".join(f"{v:.12g}" for v in res.exit_times))
    return EXIT_OK


def cmd_plot(args) -> int:
    traj, graph, _ = read_plan(args.plan)
    scn = load_coordination(args.scenario, args.grid)
    if traj.n != scn.n:
        raise _UsageError(f"plan has n={traj.n} but scenario has n={scn.n}")
    for p in write_plots(scn, traj, graph, args.out):
        print(p)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.scenario:
        scn = load_coordination(args.scenario, args.grid)
    elif args.random_n:
        scn = random_rect_scenario(args.seed, args.random_n)
    else:
        raise _UsageError("give a scenario file or --random-n")
    cfg = LatticeConfig(args.grid_step)
    best = plan_exhaustive(scn)
    dp = dp_optimal_cost(scn, cfg)
    tol = cfg.grid_step * scn.n + cfg.time_step
    diff = abs(best.cost - dp)
    oracle_ok = diff <= tol
    print(f"exhaustive cost {best.cost:.6f} graph={best.graph or '(empty)'}")
    print(f"lattice DP cost {dp:.6f} (grid_step {cfg.grid_step:g})")
    print(f"difference {diff:.6f} tolerance {tol:.6f} {'PASS' if oracle_ok else 'FAIL'}")

    checked = dominated = 0
    for g in complete_orientations(scn):
        if not is_feasible(g, scn):
            continue
        star = plan_fixed_priority(scn, g)
        for k in range(args.samples):
            psi = sample_feasible_trajectory(scn, g, args.seed * 1000 + k)
            ts = np.linspace(0.0, max(psi.duration, star.trajectory.duration), 100)
            ok = bool(np.all(star.trajectory.at(ts) >= psi.at(ts) - 1e-9)) and star.cost <= cost(psi) + 1e-12
            ok = ok and validate(psi, scn, g).ok
            checked += 1
            dominated += ok
    dom_ok = dominated == checked
    print(f"dominance {dominated}/{checked} sampled trajectories {'PASS' if dom_ok else 'FAIL'}")
    return EXIT_OK if oracle_ok and dom_ok else EXIT_GUARD


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="coordplan", description="Fixed-path intersection coordination planner")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("compile", help="geometric scenario -> abstract scenario")
    c.add_argument("input")
    c.add_argument("--grid", type=int, default=256)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compile)

    p = sub.add_parser("plan", help="plan a trajectory")
    p.add_argument("input")
    p.add_argument("--mode", choices=["fixed", "heuristic", "exhaustive"], default="exhaustive")
    p.add_argument("--graph", help='priority literal, e.g. "1>2,2>3"')
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--out")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_plan)

    g = sub.add_parser("plot", help="write SVG figures for a plan")
    g.add_argument("plan")
    g.add_argument("scenario")
    g.add_argument("--grid", type=int, default=256)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_plot)

    v = sub.add_parser("verify", help="compare the exhaustive planner with the oracles")
    v.add_argument("scenario", nargs="?")
    v.add_argument("--grid", type=int, default=256)
    v.add_argument("--grid-step", type=float, default=0.02)
    v.add_argument("--random-n", type=int, choices=[1, 2, 3])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=5)
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"coordplan {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleGraphError as exc:
        print(f"infeasible priority graph: {exc}", file=sys.stderr)
        if exc.cycle:
            print("witness cycle: " + ",".join(str(v) for v in exc.cycle), file=sys.stderr)
        return EXIT_INFEASIBLE
    except GuardError as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
