"""
Labeled Petri nets, markings and trace models.
Identifiers are interned to dense integers; names are kept for I/O.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import NotEnabled, ValidationError

# Reserved symbols
TAU = "τ"
SKIP = "≫"

TRACE_PLACE_PREFIX = "p'"
TRACE_TRANSITION_PREFIX = "t'"


def is_silent(label: str) -> bool:
    """Whether a transition label is the silent symbol."""
    return label == TAU


class Marking:
    """
    Multiset of interned place indices.
    Immutable, hashable and order-independent.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, counts: Union[Mapping[int, int], Iterable[tuple[int, int]]] = ()):
        pairs = counts.items() if isinstance(counts, Mapping) else counts
        merged: dict[int, int] = {}
        for place, count in pairs:
            merged[place] = merged.get(place, 0) + count
        if any(count < 0 for count in merged.values()):
            raise ValueError("negative token count")
        self._items = tuple(sorted((p, c) for p, c in merged.items() if c > 0))
        self._hash = hash(self._items)

    @classmethod
    def of(cls, *places: int) -> "Marking":
        """One token per listed place occurrence."""
        return cls(Counter(places))

    @property
    def items(self) -> tuple[tuple[int, int], ...]:
        return self._items

    def count(self, place: int) -> int:
        for p, c in self._items:
            if p == place:
                return c
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self._items)

    def restrict(self, limit: int) -> "Marking":
        """Keep only places with index below limit."""
        return Marking((p, c) for p, c in self._items if p < limit)

    def __add__(self, other: "Marking") -> "Marking":
        return Marking(self._items + other._items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Marking):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._items)

    def __repr__(self) -> str:
        return f"Marking({dict(self._items)})"


class LabeledPetriNet:
    """
    Labeled Petri net with initial and final marking.
    Immutable after construction; safe to share between workers.

    The constructor is tolerant: malformed arcs or markings are kept in
    the raw fields and reported by validate(), but never interned.
    """

    def __init__(
        self,
        places: Sequence[str],
        transitions: Sequence[str],
        arcs: Iterable[tuple[str, str]],
        labeling: Mapping[str, str],
        initial_marking: Mapping[str, int],
        final_marking: Mapping[str, int],
        name: str = "net"
    ):
        self.name = name
        self.places: tuple[str, ...] = tuple(places)
        self.transitions: tuple[str, ...] = tuple(transitions)
        self.arcs: tuple[tuple[str, str], ...] = tuple(arcs)
        self.labeling: dict[str, str] = dict(labeling)
        self.initial_names: dict[str, int] = dict(initial_marking)
        self.final_names: dict[str, int] = dict(final_marking)

        self.place_index = {p: i for i, p in enumerate(self.places)}
        self.transition_index = {t: i for i, t in enumerate(self.transitions)}

        pre: list[Counter] = [Counter() for _ in self.transitions]
        post: list[Counter] = [Counter() for _ in self.transitions]
        for source, target in self.arcs:
            if source in self.place_index and target in self.transition_index:
                pre[self.transition_index[target]][self.place_index[source]] += 1
            elif source in self.transition_index and target in self.place_index:
                post[self.transition_index[source]][self.place_index[target]] += 1

        self.pre: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(sorted(c.items())) for c in pre
        )
        self.post: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(sorted(c.items())) for c in post
        )
        self.labels: tuple[str, ...] = tuple(
            self.labeling.get(t, TAU) for t in self.transitions
        )

        consumers: list[list[int]] = [[] for _ in self.places]
        unconditional: list[int] = []
        for t, inputs in enumerate(self.pre):
            if not inputs:
                unconditional.append(t)
            for p, _ in inputs:
                consumers[p].append(t)
        self._consumers = tuple(tuple(ts) for ts in consumers)
        self._unconditional = tuple(unconditional)

        self.initial_marking = self._intern_marking(self.initial_names)
        self.final_marking = self._intern_marking(self.final_names)

    def _intern_marking(self, named: Mapping[str, int]) -> Marking:
        return Marking(
            (self.place_index[p], c) for p, c in named.items()
            if p in self.place_index and c > 0
        )

    # Interned API (hot path)

    def marking(self, places: Union[Mapping[str, int], Iterable[str]]) -> Marking:
        """Build a marking from place names."""
        named = places if isinstance(places, Mapping) else Counter(places)
        unknown = [p for p in named if p not in self.place_index]
        if unknown:
            raise KeyError(f"unknown places: {unknown}")
        return self._intern_marking(named)

    def enabled(self, m: Marking) -> list[int]:
        """Indices of transitions enabled in m, ascending."""
        tokens = m.as_dict()
        candidates = set(self._unconditional)
        for p in tokens:
            candidates.update(self._consumers[p])
        return sorted(
            t for t in candidates
            if all(tokens.get(p, 0) >= need for p, need in self.pre[t])
        )

    def is_enabled(self, m: Marking, t: int) -> bool:
        tokens = m.as_dict()
        return all(tokens.get(p, 0) >= need for p, need in self.pre[t])

    def fire_index(self, m: Marking, t: int) -> Marking:
        tokens = m.as_dict()
        for p, need in self.pre[t]:
            have = tokens.get(p, 0)
            if have < need:
                raise NotEnabled(
                    f"transition {self.transitions[t]!r} not enabled in {self.format_marking(m)}"
                )
            tokens[p] = have - need
        for p, add in self.post[t]:
            tokens[p] = tokens.get(p, 0) + add
        return Marking(tokens)

    # Presentation

    def marking_names(self, m: Marking) -> dict[str, int]:
        return {self.places[p]: c for p, c in m.items}

    def format_marking(self, m: Marking) -> str:
        parts = []
        for p, c in m.items:
            name = self.places[p] if p < len(self.places) else f"#{p}"
            parts.extend([name] * c)
        return "[" + ", ".join(parts) + "]"

    def activity_labels(self) -> tuple[str, ...]:
        """Distinct non-silent labels in transition order."""
        return tuple(dict.fromkeys(l for l in self.labels if not is_silent(l)))

    def __repr__(self) -> str:
        return (
            f"LabeledPetriNet({self.name!r}, places={len(self.places)}, "
            f"transitions={len(self.transitions)})"
        )


class ChainNet(LabeledPetriNet):
    """
    Linear trace or subtrace model over absolute event positions start..end.
    Place p'i holds the token once i events were consumed.
    """

    def __init__(self, events: Sequence[str], start: int = 0):
        self.start = start
        self.end = start + len(events)
        self.events: tuple[str, ...] = tuple(events)
        places = [f"{TRACE_PLACE_PREFIX}{i}" for i in range(self.start, self.end + 1)]
        transitions = [f"{TRACE_TRANSITION_PREFIX}{i}" for i in range(self.start + 1, self.end + 1)]
        arcs = []
        for offset, t in enumerate(transitions):
            arcs.append((places[offset], t))
            arcs.append((t, places[offset + 1]))
        super().__init__(
            places=places,
            transitions=transitions,
            arcs=arcs,
            labeling=dict(zip(transitions, self.events)),
            initial_marking={places[0]: 1},
            final_marking={places[-1]: 1},
            name=f"trace[{self.start}:{self.end}]"
        )


@dataclass(frozen=True)
class Trace:
    """Observed activity sequence; silent and skip symbols are rejected."""

    events: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        bad = [e for e in self.events if not e or e in (TAU, SKIP)]
        if bad:
            raise ValidationError([f"trace contains reserved or empty label {b!r}" for b in bad])

    def __len__(self) -> int:
        return len(self.events)


def validate(net: LabeledPetriNet) -> list[str]:
    """
    Check structural invariants.
    Returns one human-readable entry per violation (empty when valid).
    """
    violations: list[str] = []

    if len(set(net.places)) != len(net.places):
        violations.append("duplicate place identifiers")
    if len(set(net.transitions)) != len(net.transitions):
        violations.append("duplicate transition identifiers")

    shared = sorted(set(net.places) & set(net.transitions))
    if shared:
        violations.append(f"identifiers used as both place and transition: {shared}")

    places, transitions = set(net.places), set(net.transitions)
    known = places | transitions
    for source, target in net.arcs:
        if source not in known or target not in known:
            violations.append(f"arc {source}→{target} references unknown node")
        elif (source in places) == (target in places):
            violations.append(f"arc {source}→{target} connects same-kind nodes")

    for which, named in (("initial", net.initial_names), ("final", net.final_names)):
        for p, c in named.items():
            if p not in places:
                violations.append(f"{which} marking references unknown place {p!r}")
            elif c < 0:
                violations.append(f"{which} marking has negative count at {p!r}")

    for t in net.transitions:
        label = net.labeling.get(t)
        if label is None:
            violations.append(f"transition {t!r} has no label")
        elif label == SKIP or label == "":
            violations.append(f"transition {t!r} uses reserved label {label!r}")
    for t in net.labeling:
        if t not in transitions:
            violations.append(f"label given for unknown transition {t!r}")

    return violations


def ensure_valid(net: LabeledPetriNet) -> LabeledPetriNet:
    violations = validate(net)
    if violations:
        raise ValidationError(violations)
    return net


def enabled_transitions(net: LabeledPetriNet, m: Marking) -> set[str]:
    return {net.transitions[t] for t in net.enabled(m)}


def fire(net: LabeledPetriNet, m: Marking, t: str) -> Marking:
    index = net.transition_index.get(t)
    if index is None:
        raise NotEnabled(f"unknown transition {t!r}")
    return net.fire_index(m, index)


def trace_to_net(trace: Trace) -> ChainNet:
    return ChainNet(trace.events, start=0)


def subtrace_model(trace: Trace, j: int, k: int) -> ChainNet:
    """Chain over events j..k-1 whose identifiers carry absolute positions."""
    if not 0 <= j < k <= len(trace):
        raise IndexError(f"invalid window ({j}, {k}) for trace of length {len(trace)}")
    return ChainNet(trace.events[j:k], start=j)
