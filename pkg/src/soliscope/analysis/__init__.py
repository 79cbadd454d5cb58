"""Built-in analyses: read/write sets, protection, data dependency, taint."""

from soliscope.analysis.callgraph import CallGraph, build_call_graph
from soliscope.analysis.dependency import (
    ALL,
    DependencyAnalysis,
    TAINT_BUILTINS,
    UNPRIVILEGED,
    compute_dependencies,
)
from soliscope.analysis.protection import ProtectionInfo, compute_protection
from soliscope.analysis.readwrite import (
    ReadWriteSets,
    compute_read_write_sets,
    instruction_reads,
    instruction_writes,
)

__all__ = [
    "ALL",
    "CallGraph",
    "DependencyAnalysis",
    "ProtectionInfo",
    "ReadWriteSets",
    "TAINT_BUILTINS",
    "UNPRIVILEGED",
    "build_call_graph",
    "compute_dependencies",
    "compute_protection",
    "compute_read_write_sets",
    "instruction_reads",
    "instruction_writes",
]
