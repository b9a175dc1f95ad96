"""
A* searches over synchronous-product reachability graphs.

optimal_alignment is the exact full-trace aligner (used as oracle);
k_best_partial_alignments aligns one window from a given model marking
and returns the best goals with pairwise distinct model markings.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional
import heapq
import itertools
import logging
import time

from ..core.errors import Infeasible, NoAlignment, SearchTimeout, StateCapExceeded
from ..core.models import Alignment, Cost, Move, ZERO_COST, move_cost
from ..core.petri import ChainNet, LabeledPetriNet, Marking, Trace, trace_to_net
from .reachability import DEFAULT_STATE_CAP, ReachabilityAnalyzer, SuffixProfile, analyzer_for
from .sync_product import SyncProduct, build_sync_product

logger = logging.getLogger(__name__)

# Deadline is checked every this many expansions
_CLOCK_STRIDE = 256


class GoalMode(Enum):
    ANY_MODEL_MARKING = "any"
    MODEL_FINAL_MARKING = "final"


class BoundKind(Enum):
    """Heuristic used to order the search frontier."""

    MARGINAL = "marginal"
    UNREACHABLE = "unreachable"
    ZERO = "zero"


class Deadline:
    """Wall-clock budget shared by all searches of one trace."""

    def __init__(self, timeout_seconds: Optional[float]):
        self.started = time.monotonic()
        self.expires = None if timeout_seconds is None else self.started + timeout_seconds

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def check(self) -> None:
        if self.expires is not None and time.monotonic() >= self.expires:
            raise SearchTimeout(self.elapsed)


@dataclass
class SearchStats:
    """Counters accumulated across one or more searches."""

    nodes_expanded: int = 0
    nodes_generated: int = 0
    reopened: int = 0
    goals: int = 0

    def merge(self, other: "SearchStats") -> None:
        self.nodes_expanded += other.nodes_expanded
        self.nodes_generated += other.nodes_generated
        self.reopened += other.reopened
        self.goals += other.goals


@dataclass(frozen=True)
class RankedAlignment:
    """Partial alignment plus the key it was ranked by."""

    alignment: Alignment
    model_marking: Marking
    bound: Cost

    @property
    def key(self) -> Cost:
        return self.alignment.cost + self.bound

    def sort_key(self) -> tuple:
        return (self.key.unit, self.key.silent, self.alignment.cost.silent, self.model_marking.items)


class _Node:
    __slots__ = ("marking", "model_marking", "position", "g", "parent", "move")

    def __init__(self, marking, model_marking, position, g, parent, move):
        self.marking = marking
        self.model_marking = model_marking
        self.position = position
        self.g = g
        self.parent = parent
        self.move = move

    def moves(self) -> tuple[Move, ...]:
        path = []
        node = self
        while node.move is not None:
            path.append(node.move)
            node = node.parent
        return tuple(reversed(path))


class _Heuristic:
    """Bound over (model marking, trace position), memoized per search."""

    def __init__(
        self,
        analyzer: ReachabilityAnalyzer,
        kind: BoundKind,
        window: ChainNet,
        suffix: SuffixProfile
    ):
        self.analyzer = analyzer
        self.kind = kind
        self._start = window.start
        # profile of every unconsumed event when the trace token sits at start+i
        self._profiles = [
            SuffixProfile.from_events(window.events[i:]) + suffix
            for i in range(len(window.events) + 1)
        ]
        self._cache: dict[tuple[Marking, int], Optional[Cost]] = {}

    def profile(self, position: int) -> SuffixProfile:
        return self._profiles[position - self._start]

    def __call__(self, model_marking: Marking, position: int) -> Optional[Cost]:
        """None means the model marking can never reach the final marking."""
        key = (model_marking, position)
        if key in self._cache:
            return self._cache[key]
        if self.analyzer.is_dead(model_marking):
            value = None
        elif self.kind is BoundKind.MARGINAL:
            value = self.analyzer.marginal_lower_bound(model_marking, self.profile(position))
        elif self.kind is BoundKind.UNREACHABLE:
            value = self.analyzer.unreachable_bound(model_marking, self.profile(position))
        else:
            value = ZERO_COST
        self._cache[key] = value
        return value


def _astar(
    product: SyncProduct,
    heuristic: _Heuristic,
    is_goal: Callable[[_Node], bool],
    max_goals: int,
    state_cap: int,
    deadline: Deadline,
    stats: SearchStats
) -> list[tuple[_Node, Cost]]:
    """
    A* with reopening. Collects up to max_goals goal nodes whose model
    markings are pairwise distinct, in pop order. Returns (node, h) pairs.
    """
    net = product.net
    moves = product.moves
    limit = product.model_place_count
    costs = [move_cost(m) for m in moves]

    start = product.initial_marking
    root = _Node(start, product.model_projection(start), product.trace_position(start), ZERO_COST, None, None)
    h0 = heuristic(root.model_marking, root.position)
    if h0 is None:
        return []

    best_g: dict[Marking, Cost] = {start: ZERO_COST}
    tie = itertools.count()
    frontier = [(h0.unit, h0.silent, -1, next(tie), root, h0)]
    goals: list[tuple[_Node, Cost]] = []
    collected: set[Marking] = set()
    pops = 0

    deadline.check()
    while frontier:
        _, _, _, _, node, h = heapq.heappop(frontier)
        if best_g[node.marking] < node.g:
            continue

        pops += 1
        if pops % _CLOCK_STRIDE == 0:
            deadline.check()

        if is_goal(node) and node.model_marking not in collected:
            collected.add(node.model_marking)
            goals.append((node, h))
            stats.goals += 1
            if len(goals) >= max_goals:
                break

        stats.nodes_expanded += 1
        for t in net.enabled(node.marking):
            move = moves[t]
            marking = net.fire_index(node.marking, t)
            g = node.g + costs[t]
            known = best_g.get(marking)
            if known is not None and not g < known:
                continue
            if known is not None:
                stats.reopened += 1
            best_g[marking] = g
            if len(best_g) > state_cap:
                raise StateCapExceeded(len(best_g))
            model_marking = marking.restrict(limit) if move.has_model_side else node.model_marking
            position = node.position + 1 if move.has_log_side else node.position
            h2 = heuristic(model_marking, position)
            if h2 is None:
                continue
            child = _Node(marking, model_marking, position, g, node, move)
            stats.nodes_generated += 1
            f = g + h2
            heapq.heappush(frontier, (f.unit, f.silent, t, next(tie), child, h2))

    return goals


def optimal_alignment(
    model: LabeledPetriNet,
    trace: Trace,
    state_cap: int = DEFAULT_STATE_CAP,
    timeout: Optional[float] = None,
    *,
    use_heuristic: bool = True,
    analyzer: Optional[ReachabilityAnalyzer] = None,
    deadline: Optional[Deadline] = None,
    stats: Optional[SearchStats] = None
) -> Alignment:
    """
    Minimum-cost complete alignment of trace against model.
    With use_heuristic=False the search degenerates to Dijkstra.
    """
    analyzer = analyzer or analyzer_for(model, state_cap)
    deadline = deadline or Deadline(timeout)
    stats = stats if stats is not None else SearchStats()

    product = build_sync_product(model, trace_to_net(trace), model.initial_marking)
    if analyzer.is_dead(model.initial_marking):
        raise Infeasible(f"final marking of {model.name} is unreachable from its initial marking")

    heuristic = _Heuristic(
        analyzer,
        BoundKind.MARGINAL if use_heuristic else BoundKind.ZERO,
        product.trace_net,
        SuffixProfile(),
    )
    final = product.final_marking
    goals = _astar(
        product,
        heuristic,
        lambda node: node.marking == final,
        max_goals=1,
        state_cap=state_cap,
        deadline=deadline,
        stats=stats,
    )
    if not goals:
        raise Infeasible(f"no complete alignment exists for trace of length {len(trace)}")

    node, _ = goals[0]
    logger.debug(
        "optimal alignment: cost=%s expanded=%d", node.g, stats.nodes_expanded
    )
    return Alignment(moves=node.moves(), cost=node.g, final_marking=node.marking)


def k_best_partial_alignments(
    model: LabeledPetriNet,
    model_start: Marking,
    subtrace: ChainNet,
    suffix: SuffixProfile,
    candidates: int,
    goal_mode: GoalMode = GoalMode.ANY_MODEL_MARKING,
    state_cap: int = DEFAULT_STATE_CAP,
    timeout: Optional[float] = None,
    *,
    bound: BoundKind = BoundKind.UNREACHABLE,
    analyzer: Optional[ReachabilityAnalyzer] = None,
    deadline: Optional[Deadline] = None,
    stats: Optional[SearchStats] = None
) -> list[RankedAlignment]:
    """
    Best alignments of one window starting in model_start.

    Goals are product markings with the trace token at the window end
    (and, for MODEL_FINAL_MARKING, the model in its final marking).
    The same bound orders the frontier and ranks the goals, so goals
    leave the frontier in key order; the first goal per model marking
    is optimal for that marking.
    """
    if candidates < 1:
        raise ValueError("candidates must be at least 1")
    analyzer = analyzer or analyzer_for(model, state_cap)
    deadline = deadline or Deadline(timeout)
    stats = stats if stats is not None else SearchStats()

    product = build_sync_product(model, subtrace, model_start)
    heuristic = _Heuristic(analyzer, bound, subtrace, suffix)
    end = subtrace.end
    final = model.final_marking

    if goal_mode is GoalMode.MODEL_FINAL_MARKING:
        def is_goal(node: _Node) -> bool:
            return node.position == end and node.model_marking == final
        max_goals = 1
    else:
        def is_goal(node: _Node) -> bool:
            return node.position == end
        max_goals = candidates

    goals = _astar(product, heuristic, is_goal, max_goals, state_cap, deadline, stats)
    if not goals:
        raise NoAlignment(
            f"no alignment for window {subtrace.start}:{subtrace.end} "
            f"from {model.format_marking(model_start)}"
        )

    ranked = [
        RankedAlignment(
            alignment=Alignment(moves=node.moves(), cost=node.g, final_marking=node.marking),
            model_marking=node.model_marking,
            bound=h,
        )
        for node, h in goals
    ]
    ranked.sort(key=RankedAlignment.sort_key)
    return ranked
