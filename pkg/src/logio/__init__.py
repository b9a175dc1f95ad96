"""
Model and log input/output, plus synthetic workloads.
"""

from .eventlog import EventLog, load_log, read_log, write_log_lines
from .generator import NoiseSpec, generate_log, generate_trace, random_block_net
from .pnml import load_pnml, read_pnml, write_pnml
from .writers import read_alignment_json, write_alignment, write_alignments

__all__ = [
    "EventLog",
    "NoiseSpec",
    "generate_log",
    "generate_trace",
    "load_log",
    "load_pnml",
    "random_block_net",
    "read_alignment_json",
    "read_log",
    "read_pnml",
    "write_alignment",
    "write_alignments",
    "write_log_lines",
    "write_pnml",
]
