"""
Synthetic workload generation.
Random block-structured models, seeded random walks over a model, and
event-level noise. Every result is a function of the seed.
"""

from collections import deque
from dataclasses import dataclass
from typing import Optional, Union
import heapq
import itertools
import logging
import string

import numpy as np

from ..core.errors import GenerationStuck
from ..core.petri import TAU, LabeledPetriNet, Marking, Trace, is_silent
from ..engine.reachability import ReachabilityAnalyzer, analyzer_for
from .eventlog import EventLog

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.SeedSequence, np.random.Generator, None]


def _rng(seed: Seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


@dataclass(frozen=True)
class NoiseSpec:
    """Per-event perturbation probabilities."""

    insert_prob: float = 0.0
    delete_prob: float = 0.0
    substitute_prob: float = 0.0

    def __post_init__(self):
        probs = (self.insert_prob, self.delete_prob, self.substitute_prob)
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ValueError(f"noise probabilities must lie in [0, 1]: {probs}")
        if sum(probs) > 1.0 + 1e-9:
            raise ValueError(f"noise probabilities sum above 1: {probs}")

    @classmethod
    def parse(cls, text: str) -> "NoiseSpec":
        """From 'insert,delete,substitute'."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"noise must be insert,delete,substitute, got {text!r}")
        return cls(*(float(p) for p in parts))

    @property
    def is_zero(self) -> bool:
        return self.insert_prob == self.delete_prob == self.substitute_prob == 0.0


def apply_noise(
    events: tuple[str, ...],
    alphabet: tuple[str, ...],
    noise: NoiseSpec,
    rng: np.random.Generator
) -> tuple[str, ...]:
    if noise.is_zero:
        return events
    out: list[str] = []
    delete_until = noise.delete_prob
    substitute_until = delete_until + noise.substitute_prob
    insert_until = substitute_until + noise.insert_prob
    for event in events:
        r = rng.random()
        if r < delete_until:
            continue
        if r < substitute_until:
            others = [a for a in alphabet if a != event]
            out.append(others[rng.integers(len(others))] if others else event)
        elif r < insert_until and alphabet:
            out.append(event)
            out.append(alphabet[rng.integers(len(alphabet))])
        else:
            out.append(event)
    return tuple(out)


def _homing_path(analyzer: ReachabilityAnalyzer, start: Marking) -> list[int]:
    """Fewest visible transitions to the final marking, then fewest steps."""
    final = analyzer.model.final_marking
    labels = analyzer.model.labels
    tie = itertools.count()
    frontier = [((0, 0), next(tie), start)]
    parent: dict[Marking, Optional[tuple[Marking, int]]] = {start: None}
    cost = {start: (0, 0)}
    while frontier:
        c, _, m = heapq.heappop(frontier)
        if c > cost[m]:
            continue
        if m == final:
            path = []
            while parent[m] is not None:
                m, t = parent[m]
                path.append(t)
            return path[::-1]
        for t, m2 in analyzer.graph.successors(m):
            c2 = (c[0] + (0 if is_silent(labels[t]) else 1), c[1] + 1)
            if m2 not in cost or c2 < cost[m2]:
                cost[m2] = c2
                parent[m2] = (m, t)
                heapq.heappush(frontier, (c2, next(tie), m2))
    raise GenerationStuck(f"final marking unreachable from {analyzer.model.format_marking(start)}")


def _visible_choices(
    analyzer: ReachabilityAnalyzer, start: Marking
) -> tuple[list[tuple[int, Marking]], bool]:
    """
    Visible transitions reachable from start through silent steps only,
    one entry per (transition, marking after it), and whether the final
    marking itself is silently reachable. Dead markings are skipped.
    """
    labels = analyzer.model.labels
    final = analyzer.model.final_marking
    choices: list[tuple[int, Marking]] = []
    seen_choices: set[tuple[int, Marking]] = set()
    can_stop = False
    queue = deque([start])
    visited = {start}
    while queue:
        m = queue.popleft()
        can_stop = can_stop or m == final
        for t, m2 in analyzer.graph.successors(m):
            if analyzer.distance_to_final(m2) is None:
                continue
            if not is_silent(labels[t]):
                if (t, m2) not in seen_choices:
                    seen_choices.add((t, m2))
                    choices.append((t, m2))
            elif m2 not in visited:
                visited.add(m2)
                queue.append(m2)
    return choices, can_stop


def generate_trace(
    model: LabeledPetriNet,
    noise: Optional[NoiseSpec] = None,
    max_len: int = 50,
    seed: Seed = None,
    analyzer: Optional[ReachabilityAnalyzer] = None
) -> Trace:
    """
    Random walk from the initial marking. Each step draws uniformly among
    the visible transitions that keep the final marking reachable, firing
    silent transitions implicitly to get there; stopping counts as one
    more choice wherever the final marking is silently reachable. Once
    max_len events were emitted the walk heads home along a shortest
    path, then noise is applied.
    """
    rng = _rng(seed)
    noise = noise or NoiseSpec()
    analyzer = analyzer or analyzer_for(model)
    if analyzer.distance_to_final(model.initial_marking) is None:
        raise GenerationStuck(f"final marking of {model.name} is unreachable")

    labels = model.labels
    emitted: list[str] = []
    m = model.initial_marking

    while len(emitted) < max_len:
        choices, can_stop = _visible_choices(analyzer, m)
        options = len(choices) + int(can_stop)
        if options == 0:
            raise GenerationStuck(f"walk stalled at {model.format_marking(m)}")
        pick = int(rng.integers(options))
        if pick == len(choices):
            break
        t, m = choices[pick]
        emitted.append(labels[t])

    for t in _homing_path(analyzer, m):
        if not is_silent(labels[t]):
            emitted.append(labels[t])

    return Trace(apply_noise(tuple(emitted), model.activity_labels(), noise, rng))


def generate_log(
    model: LabeledPetriNet,
    n: int,
    noise: Optional[NoiseSpec] = None,
    max_len: int = 50,
    seed: Optional[int] = None
) -> EventLog:
    """n traces, each from its own child seed so traces are independent of n."""
    analyzer = analyzer_for(model)
    children = np.random.SeedSequence(seed).spawn(n)
    sequences = [
        generate_trace(model, noise, max_len, np.random.default_rng(child), analyzer).events
        for child in children
    ]
    logger.info("generated %d traces from %s", n, model.name)
    return EventLog.from_sequences(sequences)


def _label_names():
    for letter in string.ascii_uppercase:
        yield letter
    for i in itertools.count(1):
        for letter in string.ascii_uppercase:
            yield f"{letter}{i}"


class _BlockBuilder:
    """
    Process-tree style construction. Every block has one entry and one
    exit place, so the resulting net is sound and safe.
    """

    def __init__(self, rng: np.random.Generator, max_silent: int):
        self.rng = rng
        self.silent_left = max_silent
        self.places: list[str] = []
        self.transitions: list[str] = []
        self.arcs: list[tuple[str, str]] = []
        self.labeling: dict[str, str] = {}
        self._labels = _label_names()

    def place(self) -> str:
        name = f"p{len(self.places)}"
        self.places.append(name)
        return name

    def transition(self, inputs: list[str], outputs: list[str], silent: bool = False) -> str:
        name = f"t{len(self.transitions)}"
        self.transitions.append(name)
        self.labeling[name] = TAU if silent else next(self._labels)
        self.arcs.extend((p, name) for p in inputs)
        self.arcs.extend((name, p) for p in outputs)
        return name

    def _split(self, size: int) -> int:
        return int(self.rng.integers(1, size))

    def block(self, size: int, entry: str, exit: str) -> None:
        """Add exactly size transitions between entry and exit."""
        if size == 1:
            self.transition([entry], [exit])
            return

        options = ["seq", "xor"]
        if size >= 3:
            options.append("loop")
        if size >= 4:
            options.append("and")
        if self.silent_left > 0:
            options.append("skip")
        kind = options[int(self.rng.integers(len(options)))]

        if kind == "seq":
            k = self._split(size)
            middle = self.place()
            self.block(k, entry, middle)
            self.block(size - k, middle, exit)
        elif kind == "xor":
            k = self._split(size)
            self.block(k, entry, exit)
            self.block(size - k, entry, exit)
        elif kind == "skip":
            self.silent_left -= 1
            self.transition([entry], [exit], silent=True)
            self.block(size - 1, entry, exit)
        elif kind == "loop":
            silent_exit = self.silent_left > 0
            if silent_exit:
                self.silent_left -= 1
            k = self._split(size - 1)
            # body entry->middle, redo middle->entry, leave middle->exit
            middle = self.place()
            self.block(k, entry, middle)
            self.block(size - 1 - k, middle, entry)
            self.transition([middle], [exit], silent=silent_exit)
        else:
            k = self._split(size - 2)
            left_in, right_in = self.place(), self.place()
            left_out, right_out = self.place(), self.place()
            self.transition([entry], [left_in, right_in])
            self.block(k, left_in, left_out)
            self.block(size - 2 - k, right_in, right_out)
            self.transition([left_out, right_out], [exit])


def random_block_net(
    rng: Seed,
    max_transitions: int = 10,
    max_silent: int = 2,
    max_places: Optional[int] = None,
    attempts: int = 100
) -> LabeledPetriNet:
    """
    Random sound, safe block-structured net with at most max_transitions
    transitions, at most max_silent of them silent, and (when given) at
    most max_places places.
    """
    if max_transitions < 1:
        raise ValueError("max_transitions must be at least 1")
    rng = _rng(rng)
    for _ in range(attempts):
        size = int(rng.integers(1, max_transitions + 1))
        builder = _BlockBuilder(rng, max_silent)
        source, sink = builder.place(), builder.place()
        builder.block(size, source, sink)
        if max_places is not None and len(builder.places) > max_places:
            continue
        return LabeledPetriNet(
            places=builder.places,
            transitions=builder.transitions,
            arcs=builder.arcs,
            labeling=builder.labeling,
            initial_marking={source: 1},
            final_marking={sink: 1},
            name=f"block{size}",
        )
    raise GenerationStuck(f"no block net within {max_places} places after {attempts} attempts")
