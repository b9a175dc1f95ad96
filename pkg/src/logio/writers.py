"""
Alignment serialization.
json: one object per line, skips as explicit nulls.
tsv: per case a header row followed by the log row and the model row,
skips rendered as ≫ and silent steps as τ.
"""

from dataclasses import dataclass
from typing import Any, Iterable, Optional
import json

from ..core.errors import ParseError
from ..core.models import AlignmentResult, Cost, Move, MoveKind, sequence_cost
from ..core.petri import SKIP

FORMATS = ("json", "tsv")


def _move_dict(move: Move) -> dict[str, Any]:
    return {
        "kind": move.kind.value,
        "log": move.log_label if move.has_log_side else None,
        "model": move.model_label if move.has_model_side else None,
        "model_transition": move.model_transition,
        "trace_index": move.trace_transition,
    }


def result_dict(result: AlignmentResult) -> dict[str, Any]:
    moves = result.alignment.moves if result.alignment else ()
    return {
        "case": result.case_id,
        "method": result.method,
        "outcome": result.outcome.value,
        "trace_length": result.trace_length,
        "unit_cost": result.unit_cost,
        "silent_count": result.silent_count,
        "fitness": None if result.fitness is None else round(result.fitness, 6),
        "moves": [_move_dict(m) for m in moves],
        "windows": [w.as_dict() for w in result.windows],
        "nodes_expanded": result.nodes_expanded,
        "wall_ms": round(result.wall_ms, 3),
        "error": result.error_message,
        "config": result.config,
    }


def _tsv(result: AlignmentResult) -> str:
    moves = result.alignment.moves if result.alignment else ()
    cost = "" if result.unit_cost is None else str(result.unit_cost)
    silent = "" if result.silent_count is None else str(result.silent_count)
    rows = [
        "\t".join([result.case_id, result.outcome.value, cost, silent]),
        "\t".join(["log"] + [m.log_label for m in moves]),
        "\t".join(["model"] + [m.model_label for m in moves]),
    ]
    return "\n".join(rows) + "\n\n"


def write_alignment(result: AlignmentResult, format: str = "json") -> bytes:
    if format == "json":
        return (json.dumps(result_dict(result), ensure_ascii=False) + "\n").encode("utf-8")
    if format == "tsv":
        return _tsv(result).encode("utf-8")
    raise ValueError(f"unknown output format {format!r}, expected one of {FORMATS}")


def write_alignments(results: Iterable[AlignmentResult], format: str = "json") -> bytes:
    return b"".join(write_alignment(r, format) for r in results)


@dataclass(frozen=True)
class StoredAlignment:
    """Alignment read back from json output."""

    case_id: str
    outcome: str
    unit_cost: Optional[int]
    silent_count: Optional[int]
    moves: tuple[Move, ...]

    @property
    def replayed_cost(self) -> Cost:
        return sequence_cost(self.moves)


def _move_from_dict(data: dict[str, Any]) -> Move:
    kind = MoveKind(data["kind"])
    model = data["model"] if data["model"] is not None else SKIP
    log = data["log"] if data["log"] is not None else SKIP
    return Move(kind, data["model_transition"], data["trace_index"], (model, log))


def read_alignment_json(data: bytes) -> list[StoredAlignment]:
    stored = []
    for number, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            stored.append(StoredAlignment(
                case_id=record["case"],
                outcome=record["outcome"],
                unit_cost=record["unit_cost"],
                silent_count=record["silent_count"],
                moves=tuple(_move_from_dict(m) for m in record["moves"]),
            ))
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as e:
            raise ParseError(f"invalid alignment record: {e}", number)
    return stored
