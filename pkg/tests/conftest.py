"""
Shared fixtures: the running-example net and small helpers.
"""

from pathlib import Path

import numpy as np
import pytest

from src.core.petri import TAU, LabeledPetriNet, Trace

ASSETS = Path(__file__).resolve().parent.parent / "assets" / "models"
RUNNING_EXAMPLE_PNML = ASSETS / "running_example.pnml"

DEVIATING = "ABDCCECCE"


def build_running_example() -> LabeledPetriNet:
    """A:p0->p1, B:p1->p2, C:p2->p3, D:p3->p0, tau:p3->p2, E:p3->p4."""
    flows = {
        "A": ("p0", "p1"),
        "B": ("p1", "p2"),
        "C": ("p2", "p3"),
        "D": ("p3", "p0"),
        "tau": ("p3", "p2"),
        "E": ("p3", "p4"),
    }
    arcs = []
    for t, (src, dst) in flows.items():
        arcs += [(src, t), (t, dst)]
    labeling = {t: t for t in flows}
    labeling["tau"] = TAU
    return LabeledPetriNet(
        places=["p0", "p1", "p2", "p3", "p4"],
        transitions=list(flows),
        arcs=arcs,
        labeling=labeling,
        initial_marking={"p0": 1},
        final_marking={"p4": 1},
        name="running_example",
    )


def trace(text: str) -> Trace:
    """'ABD' -> Trace(('A', 'B', 'D'))."""
    return Trace(tuple(text))


@pytest.fixture(scope="session")
def net() -> LabeledPetriNet:
    return build_running_example()


@pytest.fixture
def m(net):
    """Marking factory by place names: m('p2')."""
    def make(*places: str):
        return net.marking(places)
    return make


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
