"""
Exception hierarchy.
Engine code raises these; the services layer turns per-trace failures
into structured results.
"""

from typing import Optional


class ConformanceError(Exception):
    """Base class for every error raised by the engine."""


class ValidationError(ConformanceError):
    """A net or input violates a structural invariant."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid input")


class NotEnabled(ConformanceError):
    """Firing a transition that is not enabled in the given marking."""


class NamespaceCollision(ConformanceError):
    """Model and trace identifiers clash inside a synchronous product."""


class StateCapExceeded(ConformanceError):
    """Explored state space grew past the configured cap."""

    def __init__(self, count: int):
        self.count = count
        super().__init__(f"state cap exceeded after {count} markings")


class DeadMarking(ConformanceError):
    """The model final marking is unreachable from a marking."""

    def __init__(self, marking: object):
        self.marking = marking
        super().__init__(f"final marking unreachable from {marking}")


class SearchTimeout(ConformanceError):
    """A search ran past its deadline."""

    def __init__(self, elapsed: float):
        self.elapsed = elapsed
        super().__init__(f"search timed out after {elapsed:.3f}s")


class Infeasible(ConformanceError):
    """No complete alignment exists (model final marking unreachable)."""


class NoAlignment(ConformanceError):
    """A window search or the sliding-window driver ran out of candidates."""


class ParseError(ConformanceError):
    """Malformed model or log input."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        element: Optional[str] = None
    ):
        self.line = line
        self.element = element
        context = []
        if line is not None:
            context.append(f"line {line}")
        if element:
            context.append(f"<{element}>")
        suffix = f" ({', '.join(context)})" if context else ""
        super().__init__(f"{message}{suffix}")


class GenerationStuck(ConformanceError):
    """Random walk made no progress towards the final marking."""


class InvariantViolation(ConformanceError):
    """An internal consistency check failed."""
