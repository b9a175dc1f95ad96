"""
Domain models - data contracts for alignments and results.
Immutable for safe sharing across workers.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Optional

from .petri import Marking, SKIP


class MoveKind(Enum):
    """Move classification in the synchronous product."""

    SYNCHRONOUS = "sync"
    LOG = "log"
    MODEL = "model"
    SILENT = "silent"


@dataclass(frozen=True, order=True)
class Cost:
    """
    Two-component alignment cost.
    Ordered lexicographically, so a silent move weighs less than any
    unit move but still more than nothing.
    """

    unit: int = 0
    silent: int = 0

    def __add__(self, other: "Cost") -> "Cost":
        return Cost(self.unit + other.unit, self.silent + other.silent)


ZERO_COST = Cost(0, 0)
SYNC_COST = ZERO_COST
SILENT_COST = Cost(0, 1)
UNIT_COST = Cost(1, 0)


@dataclass(frozen=True)
class Move:
    """
    One step of an alignment.
    trace_transition is the absolute 0-based event position;
    label_pair is (model label, log label) with SKIP for the absent side.
    """

    kind: MoveKind
    model_transition: Optional[int]
    trace_transition: Optional[int]
    label_pair: tuple[str, str]

    @property
    def model_label(self) -> str:
        return self.label_pair[0]

    @property
    def log_label(self) -> str:
        return self.label_pair[1]

    @property
    def has_model_side(self) -> bool:
        return self.model_label != SKIP

    @property
    def has_log_side(self) -> bool:
        return self.log_label != SKIP


def move_cost(move: Move) -> Cost:
    """Standard cost function: sync 0, silent epsilon, everything else 1."""
    if move.kind is MoveKind.SYNCHRONOUS:
        return SYNC_COST
    if move.kind is MoveKind.SILENT:
        return SILENT_COST
    return UNIT_COST


def sequence_cost(moves: tuple[Move, ...]) -> Cost:
    total = ZERO_COST
    for move in moves:
        total = total + move_cost(move)
    return total


@dataclass(frozen=True)
class Alignment:
    """Move sequence with its cost and the product marking it ends in."""

    moves: tuple[Move, ...]
    cost: Cost
    final_marking: Marking

    @property
    def log_projection(self) -> tuple[str, ...]:
        return tuple(m.log_label for m in self.moves if m.has_log_side)

    @property
    def model_projection(self) -> tuple[int, ...]:
        return tuple(m.model_transition for m in self.moves if m.model_transition is not None)


@dataclass(frozen=True)
class CandidateAlignment:
    """
    A retained partial alignment between windows.
    ranking_key is accumulated cost plus the configured bound term.
    """

    moves: tuple[Move, ...]
    accumulated_cost: Cost
    model_marking: Marking
    window_index: int
    ranking_key: Cost = ZERO_COST

    def sort_key(self) -> tuple:
        return (self.ranking_key.unit, self.ranking_key.silent,
                self.accumulated_cost.silent, self.model_marking.items)


class Outcome(Enum):
    """Per-trace processing outcome."""

    OK = "ok"
    TIMEOUT = "timeout"
    STATECAP = "statecap"
    FAILED = "failed"


@dataclass(frozen=True)
class WindowStats:
    """Diagnostics for one processed window."""

    index: int
    start: int
    end: int
    candidates_in: int
    candidates_out: int
    nodes_expanded: int
    wall_ms: float

    def as_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "start": self.start,
            "end": self.end,
            "candidates_in": self.candidates_in,
            "candidates_out": self.candidates_out,
            "nodes_expanded": self.nodes_expanded,
            "wall_ms": round(self.wall_ms, 3),
        }

    def without_timings(self) -> "WindowStats":
        return replace(self, wall_ms=0.0)


@dataclass(frozen=True)
class AlignmentResult:
    """
    Result of aligning one trace.
    Always returns structured data, also for timeouts and cap hits.
    """

    case_id: str
    method: str
    outcome: Outcome
    trace_length: int
    alignment: Optional[Alignment] = None
    windows: tuple[WindowStats, ...] = ()
    nodes_expanded: int = 0
    wall_ms: float = 0.0
    fitness: Optional[float] = None
    error_message: Optional[str] = None
    config: dict[str, Any] = field(default_factory=dict)

    @property
    def is_success(self) -> bool:
        return self.outcome is Outcome.OK

    @property
    def unit_cost(self) -> Optional[int]:
        return self.alignment.cost.unit if self.alignment else None

    @property
    def silent_count(self) -> Optional[int]:
        return self.alignment.cost.silent if self.alignment else None

    def without_timings(self) -> "AlignmentResult":
        """Copy with every wall-clock field zeroed, for byte-stable output."""
        return replace(
            self, wall_ms=0.0, windows=tuple(w.without_timings() for w in self.windows)
        )

    @classmethod
    def success(
        cls,
        case_id: str,
        method: str,
        trace_length: int,
        alignment: Alignment,
        windows: tuple[WindowStats, ...] = (),
        nodes_expanded: int = 0,
        wall_ms: float = 0.0,
        fitness: Optional[float] = None,
        config: Optional[dict[str, Any]] = None
    ) -> "AlignmentResult":
        """Factory method for a completed alignment."""
        return cls(
            case_id=case_id,
            method=method,
            outcome=Outcome.OK,
            trace_length=trace_length,
            alignment=alignment,
            windows=windows,
            nodes_expanded=nodes_expanded,
            wall_ms=wall_ms,
            fitness=fitness,
            config=config or {}
        )

    @classmethod
    def failure(
        cls,
        case_id: str,
        method: str,
        trace_length: int,
        outcome: Outcome,
        error_message: str,
        wall_ms: float = 0.0,
        config: Optional[dict[str, Any]] = None
    ) -> "AlignmentResult":
        """Factory method for timeouts, cap hits and failed searches."""
        return cls(
            case_id=case_id,
            method=method,
            outcome=outcome,
            trace_length=trace_length,
            error_message=error_message,
            wall_ms=wall_ms,
            config=config or {}
        )


@dataclass(frozen=True)
class BenchRecord:
    """One row of the window-sweep benchmark CSV."""

    case_id: str
    trace_length: int
    method: str
    window_length: Optional[int]
    candidates: Optional[int]
    unit_cost: Optional[int]
    oracle_unit_cost: Optional[int]
    wall_ms: float
    nodes_expanded: int
    outcome: str

    @property
    def delta_cost_pct(self) -> Optional[float]:
        if self.unit_cost is None or self.oracle_unit_cost is None:
            return None
        return (self.unit_cost - self.oracle_unit_cost) / max(self.oracle_unit_cost, 1) * 100.0

    def as_row(self) -> dict[str, Any]:
        return {
            "case_id": self.case_id,
            "trace_length": self.trace_length,
            "method": self.method,
            "window_length": self.window_length,
            "candidates": self.candidates,
            "unit_cost": self.unit_cost,
            "oracle_unit_cost": self.oracle_unit_cost,
            "delta_cost_pct": self.delta_cost_pct,
            "wall_ms": self.wall_ms,
            "nodes_expanded": self.nodes_expanded,
            "outcome": self.outcome,
        }
