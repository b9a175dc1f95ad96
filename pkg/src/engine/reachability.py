"""
Global information over the process model.
Per-marking reachable and mandatory activity labels, and the marginal
lower bound on the cost of aligning the rest of a trace.
"""

from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional
import logging
import threading
import weakref

from ..core.errors import DeadMarking, StateCapExceeded
from ..core.models import Cost
from ..core.petri import LabeledPetriNet, Marking, is_silent

logger = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 1_000_000


@dataclass(frozen=True)
class SuffixProfile:
    """Label multiplicities of the unconsumed part of a trace."""

    counts: tuple[tuple[str, int], ...] = ()

    @classmethod
    def from_events(cls, events: Iterable[str]) -> "SuffixProfile":
        return cls.from_mapping(Counter(events))

    @classmethod
    def from_mapping(cls, counts: Mapping[str, int]) -> "SuffixProfile":
        return cls(tuple(sorted((l, c) for l, c in counts.items() if c > 0)))

    @property
    def label_counts(self) -> dict[str, int]:
        return dict(self.counts)

    def count(self, label: str) -> int:
        for l, c in self.counts:
            if l == label:
                return c
        return 0

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def __add__(self, other: "SuffixProfile") -> "SuffixProfile":
        merged = Counter(dict(self.counts))
        merged.update(dict(other.counts))
        return SuffixProfile.from_mapping(merged)


@dataclass(frozen=True)
class MarkingInfo:
    reachable_labels: frozenset[str]
    mandatory_labels: frozenset[str]


class ReachabilityGraph:
    """
    Model reachability graph, expanded lazily.
    Successor lists are computed once per marking and kept.
    """

    def __init__(self, model: LabeledPetriNet, state_cap: int = DEFAULT_STATE_CAP):
        self.model = model
        self.state_cap = state_cap
        self.root = model.initial_marking
        self._successors: dict[Marking, tuple[tuple[int, Marking], ...]] = {}
        self._seen: set[Marking] = {self.root}
        self._lock = threading.RLock()

    @property
    def nodes(self) -> frozenset[Marking]:
        return frozenset(self._seen)

    def edges(self) -> Iterator[tuple[Marking, int, Marking]]:
        for m, succ in list(self._successors.items()):
            for t, m2 in succ:
                yield m, t, m2

    def successors(self, m: Marking) -> tuple[tuple[int, Marking], ...]:
        cached = self._successors.get(m)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._successors.get(m)
            if cached is not None:
                return cached
            self._seen.add(m)
            succ = tuple((t, self.model.fire_index(m, t)) for t in self.model.enabled(m))
            for _, m2 in succ:
                if m2 not in self._seen:
                    self._seen.add(m2)
                    if len(self._seen) > self.state_cap:
                        raise StateCapExceeded(len(self._seen))
            self._successors[m] = succ
            return succ

    def closure(
        self,
        start: Marking,
        allow: Optional[Callable[[int], bool]] = None,
        stop_at: Optional[Marking] = None
    ) -> tuple[set[Marking], set[int]]:
        """
        Breadth-first closure from start over transitions passing allow.
        Returns (visited markings, fired transitions); stops early once
        stop_at is visited.
        """
        visited = {start}
        fired: set[int] = set()
        queue = deque([start])
        while queue:
            m = queue.popleft()
            if stop_at is not None and m == stop_at:
                break
            for t, m2 in self.successors(m):
                if allow is not None and not allow(t):
                    continue
                fired.add(t)
                if m2 not in visited:
                    visited.add(m2)
                    queue.append(m2)
        return visited, fired


def build_model_reachability(
    model: LabeledPetriNet,
    state_cap: int = DEFAULT_STATE_CAP
) -> ReachabilityGraph:
    """Reachability graph closed from the model initial marking."""
    graph = ReachabilityGraph(model, state_cap)
    graph.closure(graph.root)
    logger.debug("model %s: %d reachable markings", model.name, len(graph.nodes))
    return graph


class ReachabilityAnalyzer:
    """
    Memoized reachable/mandatory label queries for one model.
    Entries are immutable once stored; concurrent inserts of the same
    key compute identical values.
    """

    def __init__(self, model: LabeledPetriNet, state_cap: int = DEFAULT_STATE_CAP):
        self.model = model
        self.graph = ReachabilityGraph(model, state_cap)
        self._reachable: dict[Marking, frozenset[str]] = {}
        self._mandatory: dict[Marking, Optional[frozenset[str]]] = {}
        self._distance: dict[Marking, int] = {}
        self._no_distance: set[Marking] = set()

    @property
    def state_cap(self) -> int:
        return self.graph.state_cap

    def reachable_labels(self, m: Marking) -> frozenset[str]:
        cached = self._reachable.get(m)
        if cached is None:
            _, fired = self.graph.closure(m)
            labels = self.model.labels
            cached = frozenset(labels[t] for t in fired if not is_silent(labels[t]))
            self._reachable[m] = cached
        return cached

    def _mandatory_or_dead(self, m: Marking) -> Optional[frozenset[str]]:
        if m in self._mandatory:
            return self._mandatory[m]
        final = self.model.final_marking
        visited, _ = self.graph.closure(m, stop_at=final)
        if final not in visited:
            result: Optional[frozenset[str]] = None
        else:
            labels = self.model.labels
            mandatory = set()
            for label in sorted(self.reachable_labels(m)):
                avoiding, _ = self.graph.closure(
                    m, allow=lambda t, l=label: labels[t] != l, stop_at=final
                )
                if final not in avoiding:
                    mandatory.add(label)
            result = frozenset(mandatory)
        self._mandatory[m] = result
        return result

    def mandatory_labels(self, m: Marking) -> frozenset[str]:
        result = self._mandatory_or_dead(m)
        if result is None:
            raise DeadMarking(self.model.format_marking(m))
        return result

    def is_dead(self, m: Marking) -> bool:
        return self._mandatory_or_dead(m) is None

    def info(self, m: Marking) -> MarkingInfo:
        return MarkingInfo(self.reachable_labels(m), self.mandatory_labels(m))

    def distance_to_final(self, m: Marking) -> Optional[int]:
        """
        Fewest visible transitions on any run from m to the final marking
        (silent transitions count zero). None when m is dead.
        """
        if m not in self._distance and m not in self._no_distance:
            self.graph.closure(m)
            self._distance = self._reverse_distances()
            if m not in self._distance:
                self._no_distance.add(m)
        return self._distance.get(m)

    def _reverse_distances(self) -> dict[Marking, int]:
        predecessors: dict[Marking, list[tuple[int, Marking]]] = {}
        for m, t, m2 in self.graph.edges():
            predecessors.setdefault(m2, []).append((t, m))
        final = self.model.final_marking
        distance = {final: 0}
        queue = deque([final])
        while queue:
            m2 = queue.popleft()
            for t, m in predecessors.get(m2, ()):
                step = 0 if is_silent(self.model.labels[t]) else 1
                d = distance[m2] + step
                if m not in distance or d < distance[m]:
                    distance[m] = d
                    if step == 0:
                        queue.appendleft(m)
                    else:
                        queue.append(m)
        return distance

    def unreachable_bound(self, m: Marking, suffix: SuffixProfile) -> Cost:
        """Remaining events whose label no continuation from m can fire."""
        reachable = self.reachable_labels(m)
        return Cost(sum(c for l, c in suffix.counts if l not in reachable), 0)

    def missing_mandatory_bound(self, m: Marking, suffix: SuffixProfile) -> Cost:
        """Mandatory labels absent from the remaining events."""
        present = {l for l, _ in suffix.counts}
        return Cost(sum(1 for l in self.mandatory_labels(m) if l not in present), 0)

    def marginal_lower_bound(self, m: Marking, suffix: SuffixProfile) -> Cost:
        """
        Admissible estimate of the unit cost still to come.
        Forced log moves and forced model moves are counted separately,
        so the sum never overestimates. Raises DeadMarking.
        """
        return self.unreachable_bound(m, suffix) + self.missing_mandatory_bound(m, suffix)


_analyzers: "weakref.WeakKeyDictionary[LabeledPetriNet, ReachabilityAnalyzer]" = weakref.WeakKeyDictionary()
_analyzers_lock = threading.Lock()


def analyzer_for(model: LabeledPetriNet, state_cap: int = DEFAULT_STATE_CAP) -> ReachabilityAnalyzer:
    """Shared analyzer per model object."""
    with _analyzers_lock:
        analyzer = _analyzers.get(model)
        if analyzer is None or analyzer.state_cap != state_cap:
            analyzer = ReachabilityAnalyzer(model, state_cap)
            _analyzers[model] = analyzer
        return analyzer


def reachable_labels(model: LabeledPetriNet, m: Marking, state_cap: int = DEFAULT_STATE_CAP) -> frozenset[str]:
    return analyzer_for(model, state_cap).reachable_labels(m)


def mandatory_labels(model: LabeledPetriNet, m: Marking, state_cap: int = DEFAULT_STATE_CAP) -> frozenset[str]:
    return analyzer_for(model, state_cap).mandatory_labels(m)


def marginal_lower_bound(
    model: LabeledPetriNet,
    m: Marking,
    suffix: SuffixProfile,
    state_cap: int = DEFAULT_STATE_CAP
) -> Cost:
    return analyzer_for(model, state_cap).marginal_lower_bound(m, suffix)


__all__ = [
    "DEFAULT_STATE_CAP",
    "MarkingInfo",
    "ReachabilityAnalyzer",
    "ReachabilityGraph",
    "SuffixProfile",
    "analyzer_for",
    "build_model_reachability",
    "mandatory_labels",
    "marginal_lower_bound",
    "reachable_labels",
]
