"""Flat call-tree: the per-routine summary every exporter consumes."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .callgraph import Aggregates, CallGraph, ExecCounts, aggregate, propagate_exec_counts
from .errors import ZeroTotalTime
from .model import GateTimes, RoutineId


@dataclass(frozen=True)
class CallRecord:
    """Calls between one caller and one callee, summed over call sites.

    ``self_contrib`` is the callee's own (native) time spent on behalf of the
    caller; ``children_contrib`` the time the callee spent in its callees.
    """

    name: str
    calls: int
    self_contrib: float
    children_contrib: float

    @property
    def total(self) -> float:
        return self.self_contrib + self.children_contrib


@dataclass(frozen=True)
class FlatEntry:
    index: int
    name: str
    exec_count: int
    self_time: float
    children_time: float
    callers: tuple[CallRecord, ...] = ()
    callees: tuple[CallRecord, ...] = ()

    @property
    def total_time(self) -> float:
        return self.self_time + self.children_time


@dataclass(frozen=True)
class FlatCallTree:
    entries: tuple[FlatEntry, ...]
    total_time: float
    qubit_count: int
    gate_times: GateTimes

    def __getitem__(self, name: str) -> FlatEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def __contains__(self, name: object) -> bool:
        return any(entry.name == name for entry in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def root(self) -> FlatEntry:
        for entry in self.entries:
            if not entry.callers:
                return entry
        raise ValueError("call tree has no root entry")

    def percent(self, value: float) -> float:
        if self.total_time <= 0:
            raise ZeroTotalTime()
        return 100.0 * value / self.total_time


def _entry_key(entry: FlatEntry) -> tuple[float, float, str]:
    return (-entry.self_time, -entry.total_time, entry.name)


def _record_key(record: CallRecord) -> tuple[float, int, str]:
    return (-record.total, -record.calls, record.name)


def build_flat_call_tree(
    graph: CallGraph,
    agg: Aggregates | None = None,
    counts: ExecCounts | None = None,
) -> FlatCallTree:
    """Summarise a profiled call-graph per routine.

    Entries are ordered by self time, then total time (both descending), then
    name; caller and callee lists by contributed time descending.
    """
    if agg is None:
        agg = aggregate(graph)
    if counts is None:
        counts = propagate_exec_counts(graph)

    def self_per_call(rid: RoutineId) -> float:
        return graph.duration(rid) if graph.is_native(rid) else 0.0

    callers: dict[RoutineId, list[CallRecord]] = defaultdict(list)
    callees: dict[RoutineId, list[CallRecord]] = defaultdict(list)
    for (caller, callee), k in counts.edge_calls.items():
        self_part = k * self_per_call(callee)
        children_part = k * agg[callee].total_time - self_part
        callers[callee].append(CallRecord(graph.name(caller), k, self_part, children_part))
        callees[caller].append(CallRecord(graph.name(callee), k, self_part, children_part))

    provisional = []
    for rid in graph.nodes:
        n = counts.node_exec[rid]
        self_time = n * self_per_call(rid)
        provisional.append(
            FlatEntry(
                index=0,
                name=graph.name(rid),
                exec_count=n,
                self_time=self_time,
                children_time=n * agg[rid].total_time - self_time,
                callers=tuple(sorted(callers[rid], key=_record_key)),
                callees=tuple(sorted(callees[rid], key=_record_key)),
            )
        )
    provisional.sort(key=_entry_key)
    entries = tuple(
        FlatEntry(i, e.name, e.exec_count, e.self_time, e.children_time, e.callers, e.callees)
        for i, e in enumerate(provisional, start=1)
    )
    return FlatCallTree(
        entries=entries,
        total_time=agg[graph.root].total_time,
        qubit_count=graph.ir.qubit_count,
        gate_times=graph.ir.gate_times,
    )


def total_percent(entry: FlatEntry, tree: FlatCallTree) -> float:
    """Share of the program's time spent in ``entry`` and its callees."""
    return tree.percent(entry.total_time)


def self_percent(entry: FlatEntry, tree: FlatCallTree) -> float:
    return tree.percent(entry.self_time)
