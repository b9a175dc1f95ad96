"""
Services layer - orchestration of the engines over whole logs.
"""

from .alignment_service import AlignmentService, RunSummary
from .benchmark_service import BenchmarkService, summarize

__all__ = [
    "AlignmentService",
    "BenchmarkService",
    "RunSummary",
    "summarize",
]
