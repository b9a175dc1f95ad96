import logging

import pytest

from conftest import RUNNING_EXAMPLE_PNML

from src.core.errors import ParseError
from src.core.models import (
    Alignment,
    AlignmentResult,
    Cost,
    Move,
    MoveKind,
    Outcome,
    sequence_cost,
)
from src.core.petri import SKIP, TAU, LabeledPetriNet, Marking
from src.logio.eventlog import EventLog, format_for, load_log, read_log, write_log_lines
from src.logio.pnml import load_pnml, parse_sidecar, read_pnml, write_pnml, write_sidecar
from src.logio.writers import read_alignment_json, result_dict, write_alignment, write_alignments


def same_structure(left: LabeledPetriNet, right: LabeledPetriNet) -> bool:
    return (
        left.places == right.places
        and left.transitions == right.transitions
        and left.pre == right.pre
        and left.post == right.post
        and left.labels == right.labels
        and left.initial_marking == right.initial_marking
        and left.final_marking == right.final_marking
    )


# PNML

def test_load_running_example_with_sidecar(net):
    loaded = load_pnml(RUNNING_EXAMPLE_PNML)
    assert same_structure(loaded, net)
    assert loaded.final_names == {"p4": 1}
    assert loaded.name == "running_example"


def test_invisible_transition_maps_to_tau():
    loaded = load_pnml(RUNNING_EXAMPLE_PNML)
    assert loaded.labeling["tau"] == TAU
    assert loaded.activity_labels() == ("A", "B", "C", "D", "E")


def test_missing_final_marking_is_a_parse_error():
    with pytest.raises(ParseError):
        read_pnml(RUNNING_EXAMPLE_PNML.read_bytes())


def test_truncated_document_is_a_parse_error():
    data = RUNNING_EXAMPLE_PNML.read_bytes()
    with pytest.raises(ParseError) as excinfo:
        read_pnml(data[: len(data) // 2], sidecar="p4=1")
    assert excinfo.value.line is not None


def test_place_without_id_is_rejected():
    data = b"<pnml><net id='n'><page id='g'><place/></page></net></pnml>"
    with pytest.raises(ParseError) as excinfo:
        read_pnml(data, sidecar="")
    assert excinfo.value.element == "place"


def test_write_then_read_keeps_structure(net):
    restored = read_pnml(write_pnml(net))
    assert same_structure(restored, net)
    assert restored.labeling["tau"] == TAU


def test_arc_weights_become_inscriptions():
    weighted = LabeledPetriNet(
        ["p", "q"], ["t"], [("p", "t"), ("p", "t"), ("t", "q")],
        {"t": "A"}, {"p": 2}, {"q": 1},
    )
    data = write_pnml(weighted)
    assert b"<inscription>" in data
    restored = read_pnml(data)
    assert restored.pre == weighted.pre
    assert restored.initial_names == {"p": 2}


def test_final_marking_can_come_from_sidecar(net):
    data = write_pnml(net, include_final=False)
    restored = read_pnml(data, sidecar=write_sidecar(net))
    assert restored.final_marking == net.final_marking


def test_embedded_final_marking_wins_over_sidecar(net):
    restored = read_pnml(write_pnml(net), sidecar="p0=1")
    assert restored.final_names == {"p4": 1}


def test_parse_sidecar():
    assert parse_sidecar("# comment\np4=1\n\nq = 2  # trailing\nr\n") == {"p4": 1, "q": 2, "r": 1}
    with pytest.raises(ParseError):
        parse_sidecar("p=x")


# Event logs

def test_lines_format_keeps_empty_traces():
    log = read_log(b"A B D\n\nC E\n", "lines")
    assert [case for case, _ in log] == ["1", "2", "3"]
    assert [t.events for _, t in log] == [("A", "B", "D"), (), ("C", "E")]
    assert log.total_events == 5


def test_lines_round_trip():
    log = EventLog.from_sequences([("A", "B"), (), ("C",)])
    assert read_log(write_log_lines(log), "lines").traces == log.traces


def test_csv_groups_by_case_in_file_order():
    data = b"case,activity\nc2,A\nc1,A\nc2,B\nc1,C\n"
    log = read_log(data, "csv")
    assert [case for case, _ in log] == ["c2", "c1"]
    assert [t.events for _, t in log] == [("A", "B"), ("A", "C")]


def test_csv_empty_activity_reports_line():
    with pytest.raises(ParseError) as excinfo:
        read_log(b"case,activity\nc1,A\nc1,\n", "csv")
    assert excinfo.value.line == 3


def test_csv_needs_two_columns():
    with pytest.raises(ParseError):
        read_log(b"case\nc1\n", "csv")


XES = b"""<?xml version="1.0" encoding="UTF-8"?>
<log xmlns="http://www.xes-standard.org/">
  <trace>
    <string key="concept:name" value="case-7"/>
    <string key="org:group" value="north"/>
    <event><string key="concept:name" value="A"/></event>
    <event><string key="concept:name" value="B"/></event>
  </trace>
  <trace>
    <event><string key="concept:name" value="C"/></event>
  </trace>
</log>
"""


def test_xes_reads_traces_and_keeps_attributes():
    log = read_log(XES, "xes")
    assert [case for case, _ in log] == ["case-7", "2"]
    assert [t.events for _, t in log] == [("A", "B"), ("C",)]
    assert log.attributes == {"case-7": {"org:group": "north"}}


def test_xes_concept_name_must_be_a_string():
    data = b"<log><trace><event><int key='concept:name' value='3'/></event></trace></log>"
    with pytest.raises(ParseError):
        read_log(data, "xes")


def test_xes_event_without_name_is_rejected():
    with pytest.raises(ParseError):
        read_log(b"<log><trace><event/></trace></log>", "xes")


def test_duplicate_case_ids_are_rejected():
    with pytest.raises(ParseError):
        read_log(b"<log><trace><string key='concept:name' value='x'/></trace>"
                 b"<trace><string key='concept:name' value='x'/></trace></log>", "xes")


def test_invalid_utf8_lines_report_the_line():
    with pytest.raises(ParseError) as excinfo:
        read_log(b"A B\nA B \xff\xfe C\n", "lines")
    assert excinfo.value.line == 2


@pytest.mark.parametrize("fmt, data", [
    ("csv", b"case,activity\n1,\xffA\n"),
    ("xes", b"<log><trace><event><string key='concept:name' value='\xff'/></event></trace></log>"),
])
def test_invalid_utf8_is_a_parse_error(fmt, data):
    with pytest.raises(ParseError):
        read_log(data, fmt)


def test_empty_log_warns(caplog):
    with caplog.at_level(logging.WARNING):
        log = read_log(b"", "csv")
    assert len(log) == 0
    assert "empty" in caplog.text


def test_unknown_format():
    with pytest.raises(ValueError):
        read_log(b"", "parquet")


@pytest.mark.parametrize("name, expected", [
    ("log.xes", "xes"), ("LOG.CSV", "csv"), ("traces.txt", "lines"), ("traces", "lines"),
])
def test_format_for(name, expected):
    assert format_for(name) == expected


def test_load_log_from_file(tmp_path):
    path = tmp_path / "log.csv"
    path.write_text("case,activity\n1,A\n1,B\n")
    assert load_log(path).traces[0][1].events == ("A", "B")


# Alignment writers

def sample_result() -> AlignmentResult:
    moves = (
        Move(MoveKind.SYNCHRONOUS, 0, 0, ("A", "A")),
        Move(MoveKind.LOG, None, 1, (SKIP, "X")),
        Move(MoveKind.SILENT, 4, None, (TAU, SKIP)),
        Move(MoveKind.MODEL, 1, None, ("B", SKIP)),
    )
    alignment = Alignment(moves, sequence_cost(moves), Marking())
    return AlignmentResult.success("c1", "conles", 2, alignment, fitness=0.5)


def test_tsv_rows_use_skip_and_tau():
    text = write_alignment(sample_result(), "tsv").decode("utf-8")
    assert text == (
        "c1\tok\t2\t1\n"
        f"log\tA\tX\t{SKIP}\t{SKIP}\n"
        f"model\tA\t{SKIP}\t{TAU}\tB\n"
        "\n"
    )


def test_json_record_fields():
    record = result_dict(sample_result())
    assert record["case"] == "c1"
    assert record["unit_cost"] == 2
    assert record["silent_count"] == 1
    assert record["moves"][1] == {
        "kind": "log", "log": "X", "model": None, "model_transition": None, "trace_index": 1,
    }
    assert record["moves"][2]["model"] == TAU


def test_json_lines_read_back_and_replay_cost():
    data = write_alignments([sample_result(), sample_result()], "json")
    assert data.count(b"\n") == 2
    stored = read_alignment_json(data)
    assert len(stored) == 2
    assert stored[0].moves == sample_result().alignment.moves
    assert stored[0].replayed_cost == Cost(2, 1)
    assert stored[0].unit_cost == stored[0].replayed_cost.unit


def test_failure_result_is_serialized_with_nulls():
    failed = AlignmentResult.failure("c9", "oracle", 4, Outcome.TIMEOUT, "search timed out")
    record = result_dict(failed)
    assert record["outcome"] == "timeout"
    assert record["unit_cost"] is None
    assert record["moves"] == []
    assert write_alignment(failed, "tsv").decode("utf-8").startswith("c9\ttimeout\t\t\n")


def test_invalid_alignment_record():
    with pytest.raises(ParseError) as excinfo:
        read_alignment_json(b'{"case": "c1"}\n')
    assert excinfo.value.line == 1


def test_unknown_output_format():
    with pytest.raises(ValueError):
        write_alignment(sample_result(), "xml")
