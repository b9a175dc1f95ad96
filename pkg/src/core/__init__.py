"""
Core domain models and configuration.
Clean separation of data contracts from implementation.
"""

from .config import Config, ConLESConfig, RankingMode, SearchConfig
from .models import (
    Alignment,
    AlignmentResult,
    CandidateAlignment,
    Cost,
    Move,
    MoveKind,
    Outcome,
)
from .petri import ChainNet, LabeledPetriNet, Marking, Trace

__all__ = [
    "Alignment",
    "AlignmentResult",
    "CandidateAlignment",
    "ChainNet",
    "ConLESConfig",
    "Config",
    "Cost",
    "LabeledPetriNet",
    "Marking",
    "Move",
    "MoveKind",
    "Outcome",
    "RankingMode",
    "SearchConfig",
    "Trace",
]
