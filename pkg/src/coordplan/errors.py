"""Exception hierarchy shared by every module."""


class CoordinationError(Exception):
    """Base class for all errors raised by coordplan."""


class ScenarioError(CoordinationError, ValueError):
    """Malformed scenario or a violated modeling assumption."""


class InfeasibleInputError(ScenarioError):
    """The initial state lies inside an obstacle."""


class InfeasibleGraphError(CoordinationError):
    """A priority graph admits no feasible trajectory.

    ``cycle`` holds the witness cycle as a vertex list when one exists,
    otherwise ``None`` (for instance when the graph contradicts the initial
    state rather than containing a blocking cycle).
    """

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle


class GuardError(CoordinationError):
    """A combinatorial, state-space or time-horizon guard refused to continue."""


class DeadlockError(GuardError):
    """Motion stalled before every vehicle reached the goal."""

    def __init__(self, message, time=None, state=None):
        super().__init__(message)
        self.time = time
        self.state = state
