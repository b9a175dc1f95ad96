"""
Alignment engine - synchronous products, reach analysis and searches.
"""

from .conles import ConLESAligner, conles_align, intermediate_candidates, split_trace
from .reachability import (
    ReachabilityAnalyzer,
    SuffixProfile,
    analyzer_for,
    build_model_reachability,
    mandatory_labels,
    marginal_lower_bound,
    reachable_labels,
)
from .search import (
    BoundKind,
    Deadline,
    GoalMode,
    RankedAlignment,
    SearchStats,
    k_best_partial_alignments,
    optimal_alignment,
)
from .sync_product import SyncProduct, build_sync_product

__all__ = [
    "BoundKind",
    "ConLESAligner",
    "Deadline",
    "GoalMode",
    "RankedAlignment",
    "ReachabilityAnalyzer",
    "SearchStats",
    "SuffixProfile",
    "SyncProduct",
    "analyzer_for",
    "build_model_reachability",
    "build_sync_product",
    "conles_align",
    "intermediate_candidates",
    "k_best_partial_alignments",
    "mandatory_labels",
    "marginal_lower_bound",
    "optimal_alignment",
    "reachable_labels",
    "split_trace",
]
