"""
Event log ingestion.
Formats: XES (trace/event concept:name only), CSV (case_id, activity
columns in file order) and lines (one trace per line, labels separated
by whitespace).
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Optional, Union
import io
import logging

import pandas as pd
from lxml import etree

from ..core.errors import ParseError
from ..core.petri import Trace

logger = logging.getLogger(__name__)

FORMATS = ("xes", "csv", "lines")
CONCEPT_NAME = "concept:name"


@dataclass(frozen=True)
class EventLog:
    """Ordered cases; attributes are kept per case and never interpreted."""

    traces: tuple[tuple[str, Trace], ...] = ()
    attributes: dict[str, dict[str, Any]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "traces", tuple(self.traces))
        seen: set[str] = set()
        for case_id, _ in self.traces:
            if case_id in seen:
                raise ParseError(f"duplicate case id {case_id!r}")
            seen.add(case_id)

    @classmethod
    def from_sequences(cls, sequences, prefix: str = "") -> "EventLog":
        return cls(tuple((f"{prefix}{i}", Trace(tuple(s))) for i, s in enumerate(sequences, start=1)))

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self) -> Iterator[tuple[str, Trace]]:
        return iter(self.traces)

    @property
    def total_events(self) -> int:
        return sum(len(t) for _, t in self.traces)


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"log is not UTF-8: {e.reason}", data.count(b"\n", 0, e.start) + 1)


def _read_lines(data: bytes) -> EventLog:
    text = _decode(data)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return EventLog.from_sequences(line.rstrip("\r").split() for line in lines)


def _read_csv(data: bytes) -> EventLog:
    if not data.strip():
        return EventLog()
    try:
        frame = pd.read_csv(io.StringIO(_decode(data)), dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        raise ParseError(f"malformed CSV: {e}")
    if frame.shape[1] < 2:
        raise ParseError("CSV log needs a case column and an activity column", 1)

    case_column, activity_column = frame.columns[0], frame.columns[1]
    empty = frame[(frame[case_column] == "") | (frame[activity_column] == "")]
    if not empty.empty:
        # header is line 1
        raise ParseError("empty case id or activity", int(empty.index[0]) + 2)

    traces = []
    for case_id, group in frame.groupby(case_column, sort=False):
        traces.append((str(case_id), Trace(tuple(group[activity_column]))))
    return EventLog(tuple(traces))


def _local(element) -> str:
    return etree.QName(element).localname


def _concept_name(element, required: bool) -> Optional[str]:
    for child in element:
        if not isinstance(child.tag, str) or child.get("key") != CONCEPT_NAME:
            continue
        if _local(child) != "string":
            raise ParseError(
                f"{CONCEPT_NAME} must be a string attribute", child.sourceline, _local(child)
            )
        return child.get("value", "")
    if required:
        raise ParseError(f"missing {CONCEPT_NAME}", element.sourceline, _local(element))
    return None


def _read_xes(data: bytes) -> EventLog:
    try:
        root = etree.fromstring(data, parser=etree.XMLParser(resolve_entities=False))
    except etree.XMLSyntaxError as e:
        raise ParseError(f"malformed XES: {e.msg}", e.lineno)

    traces = []
    attributes: dict[str, dict[str, Any]] = {}
    for number, trace_el in enumerate(
        (e for e in root if isinstance(e.tag, str) and _local(e) == "trace"), start=1
    ):
        case_id = _concept_name(trace_el, required=False) or str(number)
        events = tuple(
            _concept_name(event, required=True)
            for event in trace_el
            if isinstance(event.tag, str) and _local(event) == "event"
        )
        extra = {
            child.get("key"): child.get("value")
            for child in trace_el
            if isinstance(child.tag, str)
            and _local(child) != "event"
            and child.get("key") not in (None, CONCEPT_NAME)
        }
        if extra:
            attributes[case_id] = extra
        traces.append((case_id, Trace(events)))
    return EventLog(tuple(traces), attributes)


_READERS = {"xes": _read_xes, "csv": _read_csv, "lines": _read_lines}


def read_log(data: bytes, format: str = "lines") -> EventLog:
    reader = _READERS.get(format)
    if reader is None:
        raise ValueError(f"unknown log format {format!r}, expected one of {FORMATS}")
    log = reader(data)
    if not log.traces:
        logger.warning("event log is empty")
    else:
        logger.debug("read %d traces (%d events) as %s", len(log), log.total_events, format)
    return log


def format_for(path: Union[str, Path]) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".xes":
        return "xes"
    if suffix == ".csv":
        return "csv"
    return "lines"


def load_log(path: Union[str, Path], format: Optional[str] = None) -> EventLog:
    return read_log(Path(path).read_bytes(), format or format_for(path))


def write_log_lines(log: EventLog) -> bytes:
    return "".join(" ".join(trace.events) + "\n" for _, trace in log.traces).encode("utf-8")
