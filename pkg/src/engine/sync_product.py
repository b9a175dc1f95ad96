"""
Synchronous product of a process model and a (sub)trace model.
Model places keep their indices; trace places follow them, so the model
projection of a product marking is a plain index restriction.
"""

from typing import Iterable, Optional

from ..core.errors import InvariantViolation, NamespaceCollision
from ..core.models import Move, MoveKind, move_cost, sequence_cost, Cost
from ..core.petri import (
    SKIP,
    ChainNet,
    LabeledPetriNet,
    Marking,
    is_silent,
)


class SyncProduct:
    """
    Joint trace-by-model net.
    Immutable after construction; the reachability graph is never
    materialised, searches expand it on demand.
    """

    def __init__(
        self,
        model: LabeledPetriNet,
        trace_net: ChainNet,
        net: LabeledPetriNet,
        moves: tuple[Move, ...],
        initial_marking: Marking
    ):
        self.model = model
        self.trace_net = trace_net
        self.net = net
        self.moves = moves
        self.initial_marking = initial_marking
        self.model_place_count = len(model.places)
        self._by_move = {m: i for i, m in enumerate(moves)}

    # Move counts

    def count(self, kind: MoveKind) -> int:
        return sum(1 for m in self.moves if m.kind is kind)

    @property
    def model_move_count(self) -> int:
        return self.count(MoveKind.MODEL) + self.count(MoveKind.SILENT)

    @property
    def log_move_count(self) -> int:
        return self.count(MoveKind.LOG)

    @property
    def sync_move_count(self) -> int:
        return self.count(MoveKind.SYNCHRONOUS)

    # Marking helpers

    def model_projection(self, m: Marking) -> Marking:
        return m.restrict(self.model_place_count)

    def trace_position(self, m: Marking) -> int:
        """Absolute number of consumed events (position of the trace token)."""
        for p, _ in m.items:
            if p >= self.model_place_count:
                return self.trace_net.start + (p - self.model_place_count)
        raise InvariantViolation("product marking carries no trace token")

    def joint_marking(self, model_marking: Marking, position: int) -> Marking:
        offset = position - self.trace_net.start
        if not 0 <= offset <= len(self.trace_net.events):
            raise IndexError(f"position {position} outside {self.trace_net.name}")
        return model_marking + Marking.of(self.model_place_count + offset)

    @property
    def final_marking(self) -> Marking:
        """Model final marking plus the trace token at the chain end."""
        return self.joint_marking(self.model.final_marking, self.trace_net.end)

    def format_marking(self, m: Marking) -> str:
        return self.net.format_marking(m)

    # Replay

    def transition_for(self, move: Move) -> int:
        try:
            return self._by_move[move]
        except KeyError:
            raise InvariantViolation(f"move {move} does not belong to this product")

    def replay(self, moves: Iterable[Move], start: Optional[Marking] = None) -> Marking:
        """Fire moves in order; raises NotEnabled on an invalid sequence."""
        m = self.initial_marking if start is None else start
        for move in moves:
            m = self.net.fire_index(m, self.transition_for(move))
        return m

    def cost_of(self, moves: Iterable[Move]) -> Cost:
        return sequence_cost(tuple(moves))


def _arcs_by_transition(net: LabeledPetriNet) -> list[tuple[list[str], list[str]]]:
    """(input places, output places) per transition index, duplicates kept."""
    result: list[tuple[list[str], list[str]]] = [([], []) for _ in net.transitions]
    for source, target in net.arcs:
        if target in net.transition_index and source in net.place_index:
            result[net.transition_index[target]][0].append(source)
        elif source in net.transition_index and target in net.place_index:
            result[net.transition_index[source]][1].append(target)
    return result


def build_sync_product(
    model: LabeledPetriNet,
    trace_net: ChainNet,
    model_start: Optional[Marking] = None
) -> SyncProduct:
    """
    Compose model and trace chain.
    The product starts from model_start (default: model initial marking)
    plus the chain's initial token.
    """
    if model_start is None:
        model_start = model.initial_marking

    clash = set(model.places) & set(trace_net.places)
    if clash:
        raise NamespaceCollision(f"model places clash with trace places: {sorted(clash)}")

    places = list(model.places) + list(trace_net.places)
    transitions: list[str] = []
    labeling: dict[str, str] = {}
    arcs: list[tuple[str, str]] = []
    moves: list[Move] = []

    model_arcs = _arcs_by_transition(model)
    trace_arcs = _arcs_by_transition(trace_net)

    def add(name: str, label: str, move: Move, model_t: Optional[int], trace_t: Optional[int]):
        transitions.append(name)
        labeling[name] = label
        moves.append(move)
        for side, index in ((model_arcs, model_t), (trace_arcs, trace_t)):
            if index is None:
                continue
            inputs, outputs = side[index]
            arcs.extend((p, name) for p in inputs)
            arcs.extend((name, p) for p in outputs)

    for i, t in enumerate(model.transitions):
        label = model.labels[i]
        kind = MoveKind.SILENT if is_silent(label) else MoveKind.MODEL
        add(f"({t},{SKIP})", label, Move(kind, i, None, (label, SKIP)), i, None)

    for j, t in enumerate(trace_net.transitions):
        label = trace_net.labels[j]
        move = Move(MoveKind.LOG, None, trace_net.start + j, (SKIP, label))
        add(f"({SKIP},{t})", label, move, None, j)

    for i, t in enumerate(model.transitions):
        label = model.labels[i]
        if is_silent(label):
            continue
        for j, t2 in enumerate(trace_net.transitions):
            if trace_net.labels[j] == label:
                move = Move(MoveKind.SYNCHRONOUS, i, trace_net.start + j, (label, label))
                add(f"({t},{t2})", label, move, i, j)

    if len(set(transitions)) != len(transitions):
        raise NamespaceCollision("product transition names are not unique")

    initial = model.marking_names(model_start)
    initial.update(trace_net.initial_names)
    final = dict(model.final_names)
    final.update(trace_net.final_names)

    net = LabeledPetriNet(
        places=places,
        transitions=transitions,
        arcs=arcs,
        labeling=labeling,
        initial_marking=initial,
        final_marking=final,
        name=f"{model.name}x{trace_net.name}"
    )
    return SyncProduct(
        model=model,
        trace_net=trace_net,
        net=net,
        moves=tuple(moves),
        initial_marking=net.initial_marking,
    )


__all__ = ["SyncProduct", "build_sync_product", "move_cost"]
