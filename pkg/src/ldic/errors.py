"""Exception types shared across the package."""

from __future__ import annotations


class LdicError(Exception):
    """Base class for all package errors."""


class PlanError(LdicError):
    """A strategy plan could not be built or a plan invariant was violated."""


class SimulationError(LdicError):
    """A runtime invariant failed during simulation.

    Carries the slot index and, when meaningful, the level at which the
    violation was detected.
    """

    def __init__(self, message: str, *, slot: int | None = None,
                 level: int | None = None) -> None:
        super().__init__(message)
        self.slot = slot
        self.level = level
