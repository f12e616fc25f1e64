"""Exception types shared across the package."""

from __future__ import annotations


class ImcError(Exception):
    """Base class for all domain errors raised by this package."""


class EmptyTarget(ImcError):
    """The target set contains no states."""


class TargetIsWholeSpace(ImcError):
    """The target set leaves no non-target states."""


class InfeasibleRow(ImcError):
    """A constraint-specified row polytope has no feasible point."""

    def __init__(self, state: str, detail: str = ""):
        self.state = state
        super().__init__(f"row polytope of state {state!r} is infeasible"
                         + (f": {detail}" if detail else ""))


class NonStochasticVertex(ImcError):
    """A row vertex is not a probability mass function."""

    def __init__(self, state: str, vertex_index: int, detail: str = ""):
        self.state = state
        self.vertex_index = vertex_index
        super().__init__(
            f"vertex {vertex_index} of state {state!r} is not a pmf"
            + (f": {detail}" if detail else ""))


class SelectorOutOfRange(ImcError):
    """A policy selector does not name a vertex of its row polytope."""

    def __init__(self, state: str, detail: str = ""):
        self.state = state
        super().__init__(f"invalid selector for state {state!r}"
                         + (f": {detail}" if detail else ""))


class Infeasible(ImcError):
    """Phase one of the simplex method found no feasible point."""


class SingularSystem(ImcError):
    """The restricted linear hitting-time system could not be solved
    reliably; usually a sign that the target is unreachable under the
    selected transition matrix."""


class ReachabilityViolation(ImcError):
    """The model fails the reachability check required by the solvers."""

    def __init__(self, violating: tuple[str, ...]):
        self.violating = violating
        super().__init__(
            "target not reachable with positive lower probability from: "
            + ", ".join(violating))


class MaxIterationsExceeded(ImcError):
    """An iterative solver hit its safety cap before converging."""

    def __init__(self, message: str, trace=None):
        self.trace = trace
        super().__init__(message)


class TooManyCombinations(ImcError):
    """Brute-force enumeration would exceed the configured cap."""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(
            f"{count} extreme-matrix combinations exceed the cap of {cap}")
