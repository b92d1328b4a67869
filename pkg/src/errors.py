"""
Exception hierarchy for the beamforming pipeline.
Every error may carry the pipeline stage it was raised in; the CLI prints "[stage] message".
"""
from contextlib import contextmanager
from typing import Any, Iterator


class BeamformingError(Exception):
    """Base class. stage is filled in by the stage() context manager when it propagates."""

    def __init__(self, message: str, stage: str | None = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def __str__(self) -> str:
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


class DomainError(BeamformingError, ValueError):
    """Precondition violated (angle out of range, bad length, K <= 0, ...)."""


class ConditioningError(BeamformingError):
    """Matrix singular or indefinite where a positive definite one is required."""


class DegeneracyError(BeamformingError):
    """Top eigenvalue not separated from the rest."""


class ConvergenceError(BeamformingError):
    """Iterative search hit its cap. best holds the best feasible iterate found."""

    def __init__(self, message: str, best: Any = None, stage: str | None = None):
        super().__init__(message, stage)
        self.best = best


class ConfigurationError(BeamformingError, ValueError):
    """Invalid scenario, sector layout or method selection."""


class FormatError(BeamformingError, ValueError):
    """Recorded snapshot file is malformed. offset is the byte position of the problem."""

    def __init__(self, message: str, offset: int = 0, stage: str | None = None):
        super().__init__(f"{message} (at byte {offset})", stage)
        self.offset = offset


class DegenerateWeightError(BeamformingError):
    """Weight vector yields zero output interference-plus-noise power."""


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Tag BeamformingErrors raised inside the block with the stage name (innermost wins)."""
    try:
        yield
    except BeamformingError as e:
        if e.stage is None:
            e.stage = name
        raise
