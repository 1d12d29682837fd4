import numpy as np
import pytest

from coordplan.errors import InfeasibleInputError, ScenarioError
from coordplan.geometry import (
    GeometricScenario,
    PathGeometry,
    VehicleSpec,
    compile_scenario,
    compute_cross_section,
    eval_path,
    sample_cross_section,
    straight_path,
)

H = straight_path(1, (0, 5), (10, 5))
V = straight_path(2, (5, 0), (5, 10))


def test_eval_path_endpoints_and_midpoint():
    p = straight_path(1, (0, 0), (10, 0))
    assert eval_path(p, 0.0) == (0.0, 0.0)
    assert eval_path(p, 0.5) == (5.0, 0.0)
    assert eval_path(p, 1.0) == (10.0, 0.0)


def test_eval_path_l_shape():
    p = PathGeometry(1, ((0, 0), (10, 0), (10, 10)))
    assert p.length == 20.0
    assert eval_path(p, 0.75) == pytest.approx((10.0, 5.0))


@pytest.mark.parametrize("s", [-0.01, 1.01])
def test_eval_path_domain(s):
    with pytest.raises(ValueError):
        eval_path(H, s)


def test_path_invariants():
    with pytest.raises(ScenarioError):
        PathGeometry(1, ((0, 0),))
    with pytest.raises(ScenarioError):
        PathGeometry(1, ((0, 0), (0, 0), (1, 0)))


def analytic_collides(s_i, s_j):
    # both paths are 10 m long and cross at their midpoints
    return (10 * s_i - 5) ** 2 + (10 * s_j - 5) ** 2 < 1.0


def test_orthogonal_cross_section_matches_disc():
    rect, grid = compute_cross_section(H, V, 0.5, 0.5, 256)
    cell = 1 / 255
    for lo, hi in (rect.i_interval, rect.j_interval):
        assert abs(lo - 0.4) <= cell and abs(hi - 0.6) <= cell
    s = np.linspace(0, 1, 256)
    expected = analytic_collides(s[:, None], s[None, :])
    # float rounding may only disagree on samples sitting on the circle
    assert np.sum(grid != expected) <= 8


def test_cross_section_covers_every_colliding_sample():
    rect, grid = compute_cross_section(H, V, 0.5, 0.5, 64)
    s = np.linspace(0, 1, 64)
    for a, b in zip(*np.nonzero(grid)):
        assert rect.contains(s[a], s[b])


def test_parallel_and_zero_radius_are_empty():
    p1, p2 = straight_path(1, (0, 0), (10, 0)), straight_path(2, (0, 5), (10, 5))
    assert compute_cross_section(p1, p2, 0.5, 0.5, 64)[0] is None
    rect, grid = compute_cross_section(H, V, 0.0, 0.0, 64)
    assert rect is None and not grid.any()


def test_cross_section_symmetry():
    a, ga = compute_cross_section(H, V, 0.5, 0.7, 100)
    b, gb = compute_cross_section(V, H, 0.7, 0.5, 100)
    assert a.i_interval == b.j_interval and a.j_interval == b.i_interval
    assert np.array_equal(ga, gb.T)


@pytest.mark.parametrize("n", [32, 64, 128])
def test_refinement_grows_by_at_most_one_coarse_cell(n):
    coarse = sample_cross_section(H, V, 0.5, 0.5, n).rect
    fine = sample_cross_section(H, V, 0.5, 0.5, 2 * n).rect
    cell = 1 / (n - 1)
    for (c0, c1), (f0, f1) in zip(coarse, fine):
        assert f0 >= c0 - cell - 1e-12
        assert f1 <= c1 + cell + 1e-12


def test_collision_at_path_end_is_rejected():
    short = straight_path(2, (5, 0), (5, 5.3))
    with pytest.raises(ScenarioError, match="path ends"):
        compute_cross_section(H, short, 0.5, 0.5, 64)


def test_grid_resolution_minimum():
    with pytest.raises(ValueError):
        compute_cross_section(H, V, 0.5, 0.5, 8)


def geometric(paths, init=None):
    vehicles = tuple(VehicleSpec(k + 1, p.id, 0.5) for k, p in enumerate(paths))
    return GeometricScenario(tuple(paths), vehicles, tuple(init or (0.0,) * len(paths)))


def test_compile_orthogonal():
    scn = compile_scenario(geometric([H, V]), 256)
    assert scn.n == 2 and scn.x_init == (0.0, 0.0)
    (rect,) = scn.obstacles
    assert rect.pair == (1, 2)
    assert rect.i_interval == pytest.approx((0.4, 0.6), abs=1 / 255)


def test_compile_nonintersecting_paths():
    paths = [straight_path(k + 1, (0, 5 * k), (10, 5 * k)) for k in range(3)]
    assert compile_scenario(geometric(paths), 64).obstacles == ()


def test_compile_common_point():
    paths = []
    for k, deg in enumerate((0, 60, 120)):
        c, s = np.cos(np.radians(deg)), np.sin(np.radians(deg))
        paths.append(straight_path(k + 1, (5 - 5 * c, 5 - 5 * s), (5 + 5 * c, 5 + 5 * s)))
    scn = compile_scenario(geometric(paths), 256)
    assert [r.pair for r in scn.obstacles] == [(1, 2), (1, 3), (2, 3)]
    for r in scn.obstacles:
        assert r.contains(0.5, 0.5)


def test_compile_rejects_colliding_start():
    with pytest.raises(InfeasibleInputError):
        compile_scenario(geometric([H, V], init=(0.5, 0.5)), 64)


def test_geometric_scenario_invariants():
    with pytest.raises(ScenarioError, match="ids"):
        GeometricScenario((H,), (VehicleSpec(2, 1, 0.5),), (0.0,))
    with pytest.raises(ScenarioError, match="path_id"):
        GeometricScenario((H,), (VehicleSpec(1, 9, 0.5),), (0.0,))
    with pytest.raises(ScenarioError):
        VehicleSpec(1, 1, 0.0)
