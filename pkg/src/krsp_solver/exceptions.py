"""Custom exceptions for the kRSP solver."""

from typing import Any


class KrspError(Exception):
    """Base exception for all solver errors."""

    pass


class InstanceParseError(KrspError):
    """Instance text could not be parsed or failed validation.

    Raised when:
    - A line is malformed or has the wrong number of fields
    - A cost or delay is negative
    - s = t, a vertex id is dangling, or an edge is a self-loop
    """

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message)
        self.line_number = line_number

    def __str__(self) -> str:
        if self.line_number is not None:
            return f"line {self.line_number}: {super().__str__()}"
        return super().__str__()


class InvalidSolutionError(KrspError):
    """A path set references edges that are not part of the instance."""

    pass


class NotAFlowError(KrspError):
    """An edge set does not satisfy the k-flow degree conditions."""

    pass


class NoKFlowError(KrspError):
    """Fewer than k edge-disjoint s-t paths exist."""

    def __init__(self, k: int, found: int):
        super().__init__(f"only {found} edge-disjoint s-t path(s) exist, {k} requested")
        self.k = k
        self.found = found


class NotACirculationError(KrspError):
    """Edge values violate flow conservation or are negative."""

    pass


class InfeasibleInstanceError(KrspError):
    """An operation requiring a feasible instance was given an infeasible one."""

    pass


class OracleSizeError(KrspError):
    """Brute-force oracle refused an instance above its hard size cap."""

    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"oracle cap exceeded: {what}={value} > {cap}")
        self.what = what
        self.value = value
        self.cap = cap


class SolverInvariantError(KrspError):
    """An internal guarantee failed.

    Raised when the cancellation loop finds no bicameral cycle on a feasible
    instance at the last estimate rung. The state dump is JSON-ready and is
    meant to be archived as a counterexample.
    """

    def __init__(self, message: str, state: dict[str, Any] | None = None):
        super().__init__(message)
        self.state = state or {}
