"""
Sliding-window conformance checking.

The trace is cut into windows of length L. Every non-final window extends
each retained candidate with its best partial alignments, merges the
extensions (one per model marking, cheapest key wins) and keeps the top
N_c. The final window must end in the model final marking; the cheapest
completion is returned.
"""

from typing import Iterator, Optional, Union
import logging
import time

from ..core.config import ConLESConfig, RankingMode
from ..core.errors import Infeasible, NoAlignment
from ..core.models import (
    Alignment,
    AlignmentResult,
    CandidateAlignment,
    WindowStats,
    ZERO_COST,
)
from ..core.petri import ChainNet, LabeledPetriNet, Marking, Trace, subtrace_model
from .reachability import ReachabilityAnalyzer, SuffixProfile, analyzer_for
from .search import (
    BoundKind,
    Deadline,
    GoalMode,
    SearchStats,
    k_best_partial_alignments,
    optimal_alignment,
)

logger = logging.getLogger(__name__)

_RANKING_BOUND = {
    RankingMode.UNREACHABLE: BoundKind.UNREACHABLE,
    RankingMode.MARGINAL: BoundKind.MARGINAL,
    RankingMode.ACCUMULATED: BoundKind.ZERO,
}


def split_trace(trace: Union[Trace, int], window_length: int) -> list[tuple[int, int]]:
    """Contiguous (start, end) windows; all of size L except maybe the last."""
    length = trace if isinstance(trace, int) else len(trace)
    if window_length < 1:
        raise ValueError("window length must be at least 1")
    return [(j, min(j + window_length, length)) for j in range(0, length, window_length)]


def full_trace_marking(model: LabeledPetriNet, model_marking: Marking, position: int) -> Marking:
    """Product marking in the numbering of the full-trace synchronous product."""
    return model_marking + Marking.of(len(model.places) + position)


def fitness(unit_cost: int, trace_length: int, model_distance: Optional[int]) -> float:
    worst = trace_length + (model_distance or 0)
    return 1.0 - unit_cost / worst if worst > 0 else 1.0


class ConLESAligner:
    """
    Window-based aligner for one model.
    Stateless between calls apart from the shared reach-analysis cache,
    so many traces can be aligned concurrently with one instance.
    """

    def __init__(
        self,
        model: LabeledPetriNet,
        config: Optional[ConLESConfig] = None,
        analyzer: Optional[ReachabilityAnalyzer] = None
    ):
        self.model = model
        self.config = config or ConLESConfig()
        self.analyzer = analyzer or analyzer_for(model, self.config.search.state_cap)

    def align(self, trace: Trace, case_id: str = "") -> AlignmentResult:
        """Align a whole trace; raises SearchTimeout / StateCapExceeded / NoAlignment."""
        started = time.perf_counter()
        cfg = self.config
        deadline = Deadline(cfg.search.timeout_seconds)

        if cfg.oracle_fallback and len(trace) <= cfg.window_length:
            stats = SearchStats()
            alignment = optimal_alignment(
                self.model,
                trace,
                cfg.search.state_cap,
                analyzer=self.analyzer,
                deadline=deadline,
                stats=stats,
            )
            return self._result(case_id, trace, alignment, (), stats.nodes_expanded, started)

        windows: list[WindowStats] = []
        total = SearchStats()
        final: list[CandidateAlignment] = []
        for _, candidates in self._iterate(trace, deadline, windows, total):
            final = candidates

        best = final[0]
        alignment = Alignment(
            moves=best.moves,
            cost=best.accumulated_cost,
            final_marking=full_trace_marking(self.model, best.model_marking, len(trace)),
        )
        return self._result(case_id, trace, alignment, tuple(windows), total.nodes_expanded, started)

    def candidates_after(self, trace: Trace, upto_window: int) -> list[CandidateAlignment]:
        """Retained candidates after upto_window windows (0 = initial list)."""
        deadline = Deadline(self.config.search.timeout_seconds)
        for index, candidates in self._iterate(trace, deadline, [], SearchStats()):
            if index >= upto_window:
                return candidates
        return candidates

    def _result(
        self,
        case_id: str,
        trace: Trace,
        alignment: Alignment,
        windows: tuple[WindowStats, ...],
        nodes: int,
        started: float
    ) -> AlignmentResult:
        distance = self.analyzer.distance_to_final(self.model.initial_marking)
        return AlignmentResult.success(
            case_id=case_id,
            method="conles",
            trace_length=len(trace),
            alignment=alignment,
            windows=windows,
            nodes_expanded=nodes,
            wall_ms=(time.perf_counter() - started) * 1000,
            fitness=fitness(alignment.cost.unit, len(trace), distance),
            config=self.config.echo(),
        )

    def _iterate(
        self,
        trace: Trace,
        deadline: Deadline,
        window_stats: list[WindowStats],
        total: SearchStats
    ) -> Iterator[tuple[int, list[CandidateAlignment]]]:
        """Yield (windows processed, candidate list) after every window."""
        cfg = self.config
        model = self.model
        if self.analyzer.is_dead(model.initial_marking):
            raise Infeasible(f"final marking of {model.name} is unreachable from its initial marking")

        candidates = [CandidateAlignment((), ZERO_COST, model.initial_marking, 0)]
        yield 0, candidates

        windows = split_trace(trace, cfg.window_length) or [(0, 0)]
        for index, (start, end) in enumerate(windows, start=1):
            window_started = time.perf_counter()
            stats = SearchStats()
            subtrace = subtrace_model(trace, start, end) if end > start else ChainNet((), start)
            last = index == len(windows)

            if last:
                extended = self._extend_final(candidates, subtrace, index, deadline, stats)
            else:
                suffix = SuffixProfile.from_events(trace.events[end:])
                extended = self._extend(candidates, subtrace, suffix, index, deadline, stats)

            window_stats.append(WindowStats(
                index=index,
                start=start,
                end=end,
                candidates_in=len(candidates),
                candidates_out=len(extended),
                nodes_expanded=stats.nodes_expanded,
                wall_ms=(time.perf_counter() - window_started) * 1000,
            ))
            total.merge(stats)
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug(
                    "window %d [%d:%d]: %s", index, start, end,
                    ", ".join(
                        f"{model.format_marking(c.model_marking)} cost={c.accumulated_cost.unit} "
                        f"key={c.ranking_key.unit}"
                        for c in extended
                    ),
                )
            candidates = extended
            yield index, candidates

    def _extend(
        self,
        candidates: list[CandidateAlignment],
        subtrace: ChainNet,
        suffix: SuffixProfile,
        index: int,
        deadline: Deadline,
        stats: SearchStats
    ) -> list[CandidateAlignment]:
        cfg = self.config
        best: dict[Marking, CandidateAlignment] = {}
        for candidate in candidates:
            try:
                ranked = k_best_partial_alignments(
                    self.model,
                    candidate.model_marking,
                    subtrace,
                    suffix,
                    cfg.candidates,
                    GoalMode.ANY_MODEL_MARKING,
                    cfg.search.state_cap,
                    bound=_RANKING_BOUND[cfg.ranking],
                    analyzer=self.analyzer,
                    deadline=deadline,
                    stats=stats,
                )
            except NoAlignment:
                continue
            for partial in ranked:
                accumulated = candidate.accumulated_cost + partial.alignment.cost
                extension = CandidateAlignment(
                    moves=candidate.moves + partial.alignment.moves,
                    accumulated_cost=accumulated,
                    model_marking=partial.model_marking,
                    window_index=index,
                    ranking_key=accumulated + partial.bound,
                )
                kept = best.get(extension.model_marking)
                if kept is None or extension.sort_key() < kept.sort_key():
                    best[extension.model_marking] = extension

        if not best:
            raise NoAlignment(f"every candidate died in window {index}")
        return sorted(best.values(), key=CandidateAlignment.sort_key)[:cfg.candidates]

    def _extend_final(
        self,
        candidates: list[CandidateAlignment],
        subtrace: ChainNet,
        index: int,
        deadline: Deadline,
        stats: SearchStats
    ) -> list[CandidateAlignment]:
        cfg = self.config
        finals: list[CandidateAlignment] = []
        for candidate in candidates:
            try:
                ranked = k_best_partial_alignments(
                    self.model,
                    candidate.model_marking,
                    subtrace,
                    SuffixProfile(),
                    1,
                    GoalMode.MODEL_FINAL_MARKING,
                    cfg.search.state_cap,
                    bound=BoundKind.MARGINAL,
                    analyzer=self.analyzer,
                    deadline=deadline,
                    stats=stats,
                )
            except NoAlignment:
                continue
            completion = ranked[0]
            accumulated = candidate.accumulated_cost + completion.alignment.cost
            finals.append(CandidateAlignment(
                moves=candidate.moves + completion.alignment.moves,
                accumulated_cost=accumulated,
                model_marking=completion.model_marking,
                window_index=index,
                ranking_key=accumulated,
            ))

        if not finals:
            raise NoAlignment("no candidate reaches the model final marking")
        # stable sort keeps candidate order as the last tie-breaker
        return sorted(finals, key=lambda c: c.accumulated_cost)


def conles_align(
    model: LabeledPetriNet,
    trace: Trace,
    config: Optional[ConLESConfig] = None,
    case_id: str = ""
) -> AlignmentResult:
    return ConLESAligner(model, config).align(trace, case_id)


def intermediate_candidates(
    model: LabeledPetriNet,
    trace: Trace,
    config: Optional[ConLESConfig],
    upto_window: int
) -> list[CandidateAlignment]:
    return ConLESAligner(model, config).candidates_after(trace, upto_window)


__all__ = [
    "ConLESAligner",
    "conles_align",
    "fitness",
    "full_trace_marking",
    "intermediate_candidates",
    "split_trace",
]
