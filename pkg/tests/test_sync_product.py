import pytest

from conftest import DEVIATING, trace

from src.core.errors import InvariantViolation, NamespaceCollision, NotEnabled
from src.core.models import (
    SILENT_COST,
    SYNC_COST,
    UNIT_COST,
    Cost,
    Move,
    MoveKind,
    move_cost,
)
from src.core.petri import SKIP, TAU, ChainNet, LabeledPetriNet, Marking, Trace, subtrace_model, trace_to_net
from src.engine.sync_product import build_sync_product


def test_move_counts_for_abd(net, m):
    product = build_sync_product(net, trace_to_net(trace("ABD")), m("p0"))
    assert product.model_move_count == 6
    assert product.log_move_count == 3
    assert product.sync_move_count == 3


def test_empty_trace_contributes_nothing(net, m):
    product = build_sync_product(net, trace_to_net(Trace(())), m("p0"))
    assert product.log_move_count == 0
    assert product.sync_move_count == 0
    assert product.model_move_count == 6


def test_repeated_labels_give_one_sync_pair_each(net, m):
    window = subtrace_model(trace(DEVIATING), 3, 6)
    product = build_sync_product(net, window, m("p2"))
    assert product.sync_move_count == 3
    assert {mv.trace_transition for mv in product.moves if mv.kind is MoveKind.SYNCHRONOUS} == {3, 4, 5}


def test_silent_transition_has_no_sync_pair(net, m):
    product = build_sync_product(net, trace_to_net(trace("ABD")), m("p0"))
    silent = [mv for mv in product.moves if mv.kind is MoveKind.SILENT]
    assert len(silent) == 1
    assert silent[0].label_pair == (TAU, SKIP)


def test_initial_and_final_markings(net, m):
    window = subtrace_model(trace(DEVIATING), 3, 6)
    product = build_sync_product(net, window, m("p2"))
    assert product.format_marking(product.initial_marking) == "[p2, p'3]"
    assert product.format_marking(product.final_marking) == "[p4, p'6]"
    assert product.model_projection(product.initial_marking) == m("p2")
    assert product.trace_position(product.initial_marking) == 3


def test_joint_marking_round_trip(net, m):
    window = subtrace_model(trace(DEVIATING), 3, 6)
    product = build_sync_product(net, window, m("p2"))
    joint = product.joint_marking(m("p3"), 5)
    assert product.model_projection(joint) == m("p3")
    assert product.trace_position(joint) == 5
    with pytest.raises(IndexError):
        product.joint_marking(m("p3"), 7)


def test_replay_all_sync_run(net, m):
    product = build_sync_product(net, trace_to_net(trace("ABCE")), m("p0"))
    sync = [mv for mv in product.moves if mv.kind is MoveKind.SYNCHRONOUS]
    assert product.replay(sync) == product.final_marking
    assert product.cost_of(sync) == Cost(0, 0)


def test_replay_rejects_disabled_move(net, m):
    product = build_sync_product(net, trace_to_net(trace("ABD")), m("p0"))
    log_moves = [mv for mv in product.moves if mv.kind is MoveKind.LOG]
    with pytest.raises(NotEnabled):
        product.replay(reversed(log_moves))


def test_foreign_move_is_an_invariant_violation(net, m):
    product = build_sync_product(net, trace_to_net(trace("A")), m("p0"))
    with pytest.raises(InvariantViolation):
        product.transition_for(Move(MoveKind.LOG, None, 7, (SKIP, "Z")))


def test_place_name_clash_is_rejected():
    model = LabeledPetriNet(["p'0"], ["x"], [("p'0", "x")], {"x": "A"}, {"p'0": 1}, {})
    with pytest.raises(NamespaceCollision):
        build_sync_product(model, ChainNet(("A",)), Marking.of(0))


def test_move_cost_function():
    assert move_cost(Move(MoveKind.SYNCHRONOUS, 2, 3, ("C", "C"))) == SYNC_COST == Cost(0, 0)
    assert move_cost(Move(MoveKind.SILENT, 4, None, (TAU, SKIP))) == SILENT_COST == Cost(0, 1)
    assert move_cost(Move(MoveKind.LOG, None, 5, (SKIP, "E"))) == UNIT_COST == Cost(1, 0)
    assert move_cost(Move(MoveKind.MODEL, 0, None, ("A", SKIP))) == Cost(1, 0)


def test_cost_order_is_lexicographic():
    assert Cost(0, 5) < Cost(1, 0)
    assert Cost(1, 1) < Cost(1, 2)
    assert Cost(1, 2) + Cost(0, 1) == Cost(1, 3)
