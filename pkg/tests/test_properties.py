"""
Cross-checks between the sliding-window aligner, the exact search and
plain Dijkstra on generated models and traces.
"""

import numpy as np
import pytest

from conftest import DEVIATING, trace

from src.core.config import BenchConfig, ConLESConfig, RunConfig, SearchConfig
from src.core.errors import StateCapExceeded
from src.core.models import sequence_cost
from src.core.petri import ChainNet, Trace, trace_to_net
from src.engine.conles import conles_align, split_trace
from src.engine.reachability import ReachabilityAnalyzer, SuffixProfile
from src.engine.search import BoundKind, GoalMode, k_best_partial_alignments, optimal_alignment
from src.engine.sync_product import build_sync_product
from src.logio.eventlog import EventLog
from src.logio.generator import NoiseSpec, apply_noise, generate_trace, random_block_net
from src.services.benchmark_service import BenchmarkService, summarize

NOISE = NoiseSpec(0.1, 0.1, 0.1)
LONG_NOISE = NoiseSpec(insert_prob=0.1, delete_prob=0.1)


def workload(seed: int, max_len: int = 10):
    model = random_block_net(seed, max_transitions=10, max_silent=2, max_places=12)
    return model, generate_trace(model, NOISE, max_len=max_len, seed=seed)


def dijkstra_completion(model, start, events, offset=0):
    """Cheapest alignment of events from start to the final marking, no heuristic."""
    ranked = k_best_partial_alignments(
        model, start, ChainNet(events, offset), SuffixProfile(), 1,
        GoalMode.MODEL_FINAL_MARKING, bound=BoundKind.ZERO,
    )
    return ranked[0].alignment.cost


@pytest.mark.parametrize("seed", range(10))
def test_single_window_equals_oracle(seed):
    model, t = workload(seed)
    config = ConLESConfig(window_length=max(len(t), 1), candidates=1)
    assert conles_align(model, t, config).alignment.cost == optimal_alignment(model, t).cost


@pytest.mark.parametrize("seed", range(10))
def test_windowed_cost_never_beats_oracle(seed):
    model, t = workload(seed)
    result = conles_align(model, t, ConLESConfig(window_length=2, candidates=2))
    oracle = optimal_alignment(model, t)
    assert result.alignment.cost.unit >= oracle.cost.unit

    product = build_sync_product(model, trace_to_net(t))
    assert product.replay(result.alignment.moves) == product.final_marking
    assert sequence_cost(result.alignment.moves) == result.alignment.cost


@pytest.mark.parametrize("seed", range(10))
def test_heuristic_search_matches_dijkstra(seed):
    model, t = workload(seed)
    assert dijkstra_completion(model, model.initial_marking, t.events) == optimal_alignment(model, t).cost


def test_running_example_dijkstra_agrees(net):
    assert dijkstra_completion(net, net.initial_marking, trace(DEVIATING).events).unit == 2


@pytest.mark.parametrize("seed", range(6))
def test_marginal_bound_is_admissible(seed):
    model, t = workload(seed)
    analyzer = ReachabilityAnalyzer(model)
    markings, _ = analyzer.graph.closure(model.initial_marking)
    for m in markings:
        if analyzer.is_dead(m):
            continue
        for j in range(0, len(t) + 1, 2):
            suffix = t.events[j:]
            bound = analyzer.marginal_lower_bound(m, SuffixProfile.from_events(suffix))
            assert bound.unit <= dijkstra_completion(model, m, suffix, j).unit


def test_marginal_bound_is_admissible_on_running_example(net):
    analyzer = ReachabilityAnalyzer(net)
    for place in ("p0", "p1", "p2", "p3", "p4"):
        m = net.marking([place])
        for j in range(len(DEVIATING) + 1):
            suffix = tuple(DEVIATING[j:])
            bound = analyzer.marginal_lower_bound(m, SuffixProfile.from_events(suffix))
            assert bound.unit <= dijkstra_completion(net, m, suffix, j).unit


@pytest.mark.parametrize("window_length", [1, 5, 50])
@pytest.mark.parametrize("candidates", [1, 3])
def test_conforming_traces_cost_nothing(window_length, candidates):
    config = ConLESConfig(window_length=window_length, candidates=candidates)
    for seed in range(5):
        model = random_block_net(seed + 100, max_transitions=10, max_silent=2)
        t = generate_trace(model, max_len=12, seed=seed)
        assert conles_align(model, t, config).unit_cost == 0


def multi_window_workload(seed: int, min_len: int = 10, max_len: int = 25):
    """Random net and noisy trace with min_len..max_len events, found by resampling."""
    rng = np.random.default_rng(seed)
    for _ in range(200):
        model = random_block_net(rng, max_transitions=10, max_silent=2, max_places=12)
        t = generate_trace(model, NOISE, max_len=max_len - 5, seed=rng)
        if min_len <= len(t) <= max_len:
            return model, t
    pytest.fail(f"no trace of {min_len}..{max_len} events for seed {seed}")


@pytest.mark.slow
def test_random_corpus_against_oracle():
    exact, optimal, total = 0, 0, 200
    for seed in range(total):
        model, t = multi_window_workload(seed)
        assert len(split_trace(len(t), 5)) >= 2
        oracle = optimal_alignment(model, t).cost.unit

        single = conles_align(model, t, ConLESConfig(window_length=len(t), candidates=1))
        exact += single.unit_cost == oracle

        windowed = conles_align(model, t, ConLESConfig(window_length=5, candidates=3))
        assert windowed.unit_cost >= oracle
        optimal += windowed.unit_cost == oracle

    assert exact == total
    assert optimal / total >= 0.8


def looping_trace(length: int, seed: int) -> Trace:
    """Noisy run of the running example: ABCD repeated, closed by ABCE."""
    events = tuple("ABCD" * ((length - 4) // 4) + "ABCE")
    return Trace(apply_noise(events, tuple("ABCDE"), LONG_NOISE, np.random.default_rng(seed)))


@pytest.mark.slow
def test_long_traces_scale_linearly_within_budget(net):
    # every 50-event window fits the cap, the whole-trace search does not
    config = ConLESConfig(window_length=50, candidates=3, search=SearchConfig(state_cap=2000))
    traces = [looping_trace(length, seed=length) for length in (500, 1000, 2000, 4000)]
    results = [conles_align(net, t, config) for t in traces]

    assert all(r.is_success for r in results)
    assert results[-1].wall_ms < 120_000
    for shorter, longer in zip(results, results[1:]):
        assert longer.nodes_expanded <= 3 * shorter.nodes_expanded
        assert longer.wall_ms <= 3 * shorter.wall_ms

    assert results[0].unit_cost >= optimal_alignment(net, traces[0]).cost.unit
    with pytest.raises(StateCapExceeded):
        optimal_alignment(net, traces[-1], config.search.state_cap)


@pytest.mark.slow
def test_window_sweep_trends(net):
    log = EventLog.from_sequences(looping_trace(400, seed).events for seed in range(5))
    assert 1900 <= log.total_events <= 2100

    bench = BenchConfig(windows=(25, 50, 100, 200, 400), candidates=(3,))
    frame = BenchmarkService(net, ConLESConfig(), bench, RunConfig(show_progress=False)).run(log)
    summary = summarize(frame)
    assert list(summary["window_length"]) == [25, 50, 100, 200, 400]

    delta = list(summary["mean_delta_cost_pct"])
    wall = list(summary["mean_wall_ms"])
    for i in range(len(delta) - 1):
        assert delta[i + 1] <= delta[i] + 1.0
        assert wall[i + 1] >= 0.9 * wall[i]
    assert wall[-1] > wall[0]
