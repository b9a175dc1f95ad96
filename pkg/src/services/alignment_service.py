"""
Alignment service - per-trace conformance checking over a whole log.
Abstracts the engines from the command layer.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional
import logging
import math
import sys
import time

import numpy as np
from tqdm import tqdm

from ..core.config import ConLESConfig, RunConfig
from ..core.errors import (
    DeadMarking,
    Infeasible,
    NoAlignment,
    SearchTimeout,
    StateCapExceeded,
)
from ..core.models import AlignmentResult, Outcome
from ..core.petri import LabeledPetriNet, Trace
from ..engine.conles import ConLESAligner, fitness
from ..engine.search import Deadline, SearchStats, optimal_alignment
from ..logio.eventlog import EventLog

logger = logging.getLogger(__name__)

METHODS = ("conles", "oracle")


@dataclass(frozen=True)
class RunSummary:
    """Per-command averages, computed per trace then across traces."""

    traces: int
    mean_unit_cost: float
    mean_wall_ms: float
    timeouts: int
    statecap: int
    failed: int

    @classmethod
    def of(cls, results: Iterable[AlignmentResult]) -> "RunSummary":
        results = list(results)
        costs = [r.unit_cost for r in results if r.is_success]
        return cls(
            traces=len(results),
            mean_unit_cost=float(np.mean(costs)) if costs else math.nan,
            mean_wall_ms=float(np.mean([r.wall_ms for r in results])) if results else math.nan,
            timeouts=sum(1 for r in results if r.outcome is Outcome.TIMEOUT),
            statecap=sum(1 for r in results if r.outcome is Outcome.STATECAP),
            failed=sum(1 for r in results if r.outcome is Outcome.FAILED),
        )

    def line(self) -> str:
        return (
            f"traces={self.traces} mean_unit_cost={self.mean_unit_cost:.3f} "
            f"mean_wall_ms={self.mean_wall_ms:.3f} timeouts={self.timeouts} "
            f"statecap={self.statecap}"
        )


class AlignmentService:
    """
    Aligns traces against one model.
    Returns structured AlignmentResult objects (never throws for
    per-trace timeouts, cap hits or dead ends).
    """

    def __init__(
        self,
        model: LabeledPetriNet,
        config: Optional[ConLESConfig] = None,
        run: Optional[RunConfig] = None
    ):
        self._model = model
        self._config = config or ConLESConfig()
        self._run = run or RunConfig()
        self._aligner = ConLESAligner(model, self._config)

    @property
    def config(self) -> ConLESConfig:
        return self._config

    def align_trace(self, case_id: str, trace: Trace, method: str = "conles") -> AlignmentResult:
        start_time = time.perf_counter()
        try:
            if method == "conles":
                return self._aligner.align(trace, case_id)
            if method == "oracle":
                return self._oracle(case_id, trace, start_time)
            raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")

        except SearchTimeout as e:
            outcome, message = Outcome.TIMEOUT, str(e)
        except StateCapExceeded as e:
            outcome, message = Outcome.STATECAP, str(e)
        except (NoAlignment, Infeasible, DeadMarking) as e:
            outcome, message = Outcome.FAILED, str(e)

        logger.warning("case %s: %s (%s)", case_id, outcome.value, message)
        return AlignmentResult.failure(
            case_id=case_id,
            method=method,
            trace_length=len(trace),
            outcome=outcome,
            error_message=message,
            wall_ms=(time.perf_counter() - start_time) * 1000,
            config=self._config.echo(),
        )

    def _oracle(self, case_id: str, trace: Trace, start_time: float) -> AlignmentResult:
        stats = SearchStats()
        analyzer = self._aligner.analyzer
        alignment = optimal_alignment(
            self._model,
            trace,
            self._config.search.state_cap,
            analyzer=analyzer,
            deadline=Deadline(self._config.search.timeout_seconds),
            stats=stats,
        )
        distance = analyzer.distance_to_final(self._model.initial_marking)
        return AlignmentResult.success(
            case_id=case_id,
            method="oracle",
            trace_length=len(trace),
            alignment=alignment,
            nodes_expanded=stats.nodes_expanded,
            wall_ms=(time.perf_counter() - start_time) * 1000,
            fitness=fitness(alignment.cost.unit, len(trace), distance),
            config=self._config.echo(),
        )

    def align_log(self, log: EventLog, method: str = "conles") -> list[AlignmentResult]:
        """Results in log order; traces run in parallel when jobs > 1."""
        progress = tqdm(
            total=len(log),
            desc=method,
            unit="trace",
            file=sys.stderr,
            disable=not self._run.show_progress or None,
        )
        results: list[AlignmentResult] = []
        with progress:
            if self._run.jobs <= 1 or len(log) <= 1:
                for case_id, trace in log:
                    results.append(self.align_trace(case_id, trace, method))
                    progress.update()
            else:
                with ProcessPoolExecutor(
                    max_workers=self._run.jobs,
                    initializer=_init_worker,
                    initargs=(self._model, self._config),
                ) as pool:
                    jobs = [(case_id, trace, method) for case_id, trace in log]
                    for result in pool.map(_align_in_worker, jobs):
                        results.append(result)
                        progress.update()

        if self._run.omit_timings:
            results = [r.without_timings() for r in results]

        logger.info("%s: %s", method, RunSummary.of(results).line())
        return results


_worker_service: Optional[AlignmentService] = None


def _init_worker(model: LabeledPetriNet, config: ConLESConfig) -> None:
    global _worker_service
    _worker_service = AlignmentService(model, config)


def _align_in_worker(job: tuple[str, Trace, str]) -> AlignmentResult:
    case_id, trace, method = job
    return _worker_service.align_trace(case_id, trace, method)
