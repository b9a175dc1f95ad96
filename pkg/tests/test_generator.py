import numpy as np
import pytest

from src.core.errors import GenerationStuck
from src.core.petri import TAU, LabeledPetriNet, is_silent, validate
from src.engine.reachability import ReachabilityAnalyzer
from src.engine.search import optimal_alignment
from src.logio.generator import (
    NoiseSpec,
    apply_noise,
    generate_log,
    generate_trace,
    random_block_net,
)


def test_noise_spec_parse_and_validation():
    assert NoiseSpec.parse("0.1, 0.2,0.3") == NoiseSpec(0.1, 0.2, 0.3)
    assert NoiseSpec().is_zero
    with pytest.raises(ValueError):
        NoiseSpec.parse("0.1,0.2")
    with pytest.raises(ValueError):
        NoiseSpec(0.6, 0.6, 0.0)
    with pytest.raises(ValueError):
        NoiseSpec(-0.1, 0.0, 0.0)


def test_apply_noise_extremes(rng):
    events = ("A", "B", "C")
    alphabet = ("A", "B", "C", "D")
    assert apply_noise(events, alphabet, NoiseSpec(), rng) == events
    assert apply_noise(events, alphabet, NoiseSpec(delete_prob=1.0), rng) == ()

    substituted = apply_noise(events, alphabet, NoiseSpec(substitute_prob=1.0), rng)
    assert len(substituted) == 3
    assert all(new != old for new, old in zip(substituted, events))

    inserted = apply_noise(events, alphabet, NoiseSpec(insert_prob=1.0), rng)
    assert len(inserted) == 6
    assert inserted[::2] == events


def test_noise_free_traces_fit_the_model(net):
    log = generate_log(net, 5, max_len=12, seed=3)
    assert len(log) == 5
    for _, t in log:
        assert optimal_alignment(net, t).cost.unit == 0


def test_walk_respects_length_limit(net):
    for seed in range(10):
        t = generate_trace(net, max_len=5, seed=seed)
        # the walk stops at 5 events, homing from p0 needs at most 4 more
        assert 4 <= len(t) <= 9
        assert t.events[0] == "A"
        assert t.events[-1] == "E"


def test_generate_log_is_seeded(net):
    noise = NoiseSpec(0.1, 0.1, 0.1)
    first = generate_log(net, 6, noise, max_len=10, seed=11)
    second = generate_log(net, 6, noise, max_len=10, seed=11)
    assert first.traces == second.traces


def test_child_seeds_keep_prefix_stable(net):
    short = generate_log(net, 3, max_len=10, seed=5)
    longer = generate_log(net, 6, max_len=10, seed=5)
    assert longer.traces[:3] == short.traces


def test_full_deletion_gives_empty_traces(net):
    log = generate_log(net, 4, NoiseSpec(delete_prob=1.0), seed=1)
    assert all(len(t) == 0 for _, t in log)


def test_dead_model_cannot_generate():
    stuck = LabeledPetriNet(["s", "f"], ["a"], [("s", "a")], {"a": "A"}, {"s": 1}, {"f": 1})
    with pytest.raises(GenerationStuck):
        generate_trace(stuck, seed=0)


def test_walk_draws_over_visible_choices():
    # A directly, or B and C behind one silent step
    model = LabeledPetriNet(
        ["s", "m", "f"],
        ["a", "tau", "b", "c"],
        [("s", "a"), ("a", "f"), ("s", "tau"), ("tau", "m"),
         ("m", "b"), ("b", "f"), ("m", "c"), ("c", "f")],
        {"a": "A", "tau": TAU, "b": "B", "c": "C"},
        {"s": 1},
        {"f": 1},
    )
    traces = [generate_trace(model, max_len=5, seed=seed).events for seed in range(600)]
    assert set(traces) == {("A",), ("B",), ("C",)}
    share = traces.count(("A",)) / len(traces)
    assert 0.25 < share < 0.42


@pytest.mark.parametrize("seed", range(12))
def test_random_block_nets_are_sound_and_bounded(seed):
    model = random_block_net(seed, max_transitions=10, max_silent=2)
    assert validate(model) == []
    assert 1 <= len(model.transitions) <= 10
    assert sum(is_silent(label) for label in model.labels) <= 2

    analyzer = ReachabilityAnalyzer(model, state_cap=10_000)
    assert analyzer.distance_to_final(model.initial_marking) is not None
    for m in analyzer.graph.closure(model.initial_marking)[0]:
        assert all(count == 1 for _, count in m.items)
        assert not analyzer.is_dead(m)


def test_random_block_net_place_limit():
    model = random_block_net(np.random.default_rng(4), max_transitions=10, max_places=4)
    assert len(model.places) <= 4


def test_random_block_net_rejects_empty_size():
    with pytest.raises(ValueError):
        random_block_net(0, max_transitions=0)


def test_traces_of_random_nets_align_at_zero_cost():
    for seed in range(5):
        model = random_block_net(seed, max_transitions=8, max_silent=2)
        t = generate_trace(model, max_len=8, seed=seed)
        assert optimal_alignment(model, t).cost.unit == 0
