"""Call-graph profiler for hierarchical quantum circuits.

Typical use::

    from circuit_profiler import load_qasm, profile, export_gprof

    ir = load_qasm(source, {"u1": 0, "u2": 35, "u3": 70, "cx": 300})
    print(export_gprof(profile(ir)))
"""

from __future__ import annotations

from .callgraph import (
    Aggregates,
    CallGraph,
    ExecCounts,
    RoutineAggregate,
    aggregate,
    build_call_graph,
    detect_cycles,
    propagate_exec_counts,
)
from .errors import ProfilerError, RecursionUnsupported
from .exporters import DotThresholds, export_dot, export_gprof, export_json, parse_json_report
from .frontends import load_interchange, load_qasm, lower_qasm, parse_interchange, parse_qasm
from .model import (
    CircuitIR,
    GateTimes,
    Routine,
    RoutineAdapter,
    RoutineKind,
    TableRoutine,
    build_ir,
    parse_gate_times,
    validate_gate_times,
)
from .report import CallRecord, FlatCallTree, FlatEntry, build_flat_call_tree, total_percent


def profile(ir: CircuitIR, root: str | None = None) -> FlatCallTree:
    """Run the whole analysis on ``ir`` and return the flat call-tree.

    ``root`` selects a sub-routine to profile as if it were the program.
    """
    graph = build_call_graph(ir, root)
    cycles = detect_cycles(graph)
    if cycles:
        raise RecursionUnsupported(cycles[0])
    return build_flat_call_tree(graph, aggregate(graph), propagate_exec_counts(graph))


__all__ = [
    "Aggregates",
    "CallGraph",
    "CallRecord",
    "CircuitIR",
    "DotThresholds",
    "ExecCounts",
    "FlatCallTree",
    "FlatEntry",
    "GateTimes",
    "ProfilerError",
    "RecursionUnsupported",
    "Routine",
    "RoutineAdapter",
    "RoutineAggregate",
    "RoutineKind",
    "TableRoutine",
    "aggregate",
    "build_call_graph",
    "build_flat_call_tree",
    "build_ir",
    "detect_cycles",
    "export_dot",
    "export_gprof",
    "export_json",
    "load_interchange",
    "load_qasm",
    "lower_qasm",
    "parse_gate_times",
    "parse_interchange",
    "parse_json_report",
    "parse_qasm",
    "profile",
    "propagate_exec_counts",
    "total_percent",
    "validate_gate_times",
]
