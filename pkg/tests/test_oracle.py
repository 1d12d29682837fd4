import numpy as np
import pytest

from conftest import common_point, free_scenario, square_pair
from coordplan.coordspace import CoordinationScenario
from coordplan.errors import GuardError, InfeasibleGraphError
from coordplan.oracle import (
    LatticeConfig,
    dp_optimal_cost,
    random_rect_scenario,
    sample_feasible_trajectory,
)
from coordplan.planner import cost_bounds, plan_fixed_priority, validate
from coordplan.priority import PriorityGraph, complete_orientations, extract_priority_graph, is_feasible

G = PriorityGraph.parse


@pytest.mark.parametrize("step, ok", [(0.02, True), (0.1, True), (0.03, False), (0.0, False), (0.2, False)])
def test_lattice_config(step, ok):
    if ok:
        cfg = LatticeConfig(step)
        assert cfg.time_step == step and cfg.cells == round(1 / step)
    else:
        with pytest.raises(ValueError):
            LatticeConfig(step)


def test_dp_symmetric_bracket():
    assert 1.1 - 0.06 <= dp_optimal_cost(square_pair(), LatticeConfig(0.02)) <= 1.1 + 0.06


def test_dp_obstacle_free_is_exact():
    assert dp_optimal_cost(free_scenario(2)) == 1.0
    assert dp_optimal_cost(free_scenario(3), LatticeConfig(0.05)) == 1.0


@pytest.mark.parametrize("x0", [0.0, 0.3, 0.5])
def test_dp_single_vehicle(x0):
    scn = CoordinationScenario(1, (), (x0,))
    assert dp_optimal_cost(scn) == pytest.approx(1 - x0, abs=1e-12)


def test_dp_guard():
    with pytest.raises(GuardError):
        dp_optimal_cost(free_scenario(4))
    with pytest.raises(GuardError):
        dp_optimal_cost(free_scenario(3), LatticeConfig(0.005))


@pytest.mark.parametrize("seed", range(8))
def test_dp_within_bounds_and_refines(seed):
    n = 2 + seed % 2
    scn = random_rect_scenario(seed, n)
    lo, hi = cost_bounds(n)
    coarse = dp_optimal_cost(scn, LatticeConfig(0.05))
    fine = dp_optimal_cost(scn, LatticeConfig(0.025))
    assert coarse >= lo and fine >= lo
    assert fine <= hi + 0.025 * n + 0.025
    assert fine <= coarse + 0.05 + 1e-12


def test_sampler_is_deterministic_and_varies():
    scn = square_pair()
    g = G(2, "1>2")
    a = sample_feasible_trajectory(scn, g, 3)
    b = sample_feasible_trajectory(scn, g, 3)
    c = sample_feasible_trajectory(scn, g, 4)
    assert np.array_equal(a.times, b.times) and np.array_equal(a.states, b.states)
    assert len(a.times) != len(c.times) or not np.allclose(a.states, c.states)


def test_sampler_rejects_infeasible_graph():
    with pytest.raises(InfeasibleGraphError):
        sample_feasible_trajectory(common_point(), G(3, "1>2,2>3,3>1"), 0)


@pytest.mark.parametrize("seed", range(15))
def test_sampled_trajectories_realize_graph(seed):
    scn = random_rect_scenario(seed, 3)
    for g in complete_orientations(scn):
        if not is_feasible(g, scn):
            continue
        psi = sample_feasible_trajectory(scn, g, seed)
        rep = validate(psi, scn, g)
        assert rep.ok, rep.first
        assert extract_priority_graph(psi, scn) == g


@pytest.mark.parametrize("seed", range(10))
def test_greedy_sampler_reproduces_fixed_plan(seed):
    scn = random_rect_scenario(seed, 3)
    for g in complete_orientations(scn):
        if not is_feasible(g, scn):
            continue
        psi = sample_feasible_trajectory(scn, g, seed, greedy=True)
        star = plan_fixed_priority(scn, g).trajectory
        ts = np.linspace(0, max(psi.duration, star.duration), 200)
        assert np.allclose(psi.at(ts), star.at(ts), atol=1e-9)


def test_random_scenarios_are_seeded():
    a, b = random_rect_scenario(5, 3), random_rect_scenario(5, 3)
    assert a == b
    assert random_rect_scenario(6, 3) != a
