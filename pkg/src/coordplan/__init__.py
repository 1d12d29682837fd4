"""Cooperative intersection planning in the coordination space of fixed paths."""

from .coordspace import (
    CollisionRect,
    ConvexCrossSection,
    CoordinationScenario,
    Disc,
    Region2D,
    gate,
    south,
    state_is_free,
    sw_completion,
    swept_obstacle,
    west,
)
from .errors import (
    CoordinationError,
    DeadlockError,
    GuardError,
    InfeasibleGraphError,
    InfeasibleInputError,
    ScenarioError,
)
from .geometry import (
    GeometricScenario,
    PathGeometry,
    VehicleSpec,
    compile_scenario,
    compute_cross_section,
    eval_path,
)
from .planner import (
    PlanResult,
    cost_bounds,
    plan_exhaustive,
    plan_fixed_priority,
    plan_heuristic,
    simulate_projection,
    validate,
)
from .priority import (
    PriorityGraph,
    complete_orientations,
    extract_priority_graph,
    is_feasible,
    necessary_condition,
    simple_cycles,
)
from .trajectory import Trajectory, cost

__version__ = "0.1.0"
