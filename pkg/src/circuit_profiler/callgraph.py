"""Deduplicated call-graph, recursion detection and memoized aggregation."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from .errors import RecursionUnsupported
from .model import CircuitIR, GateTimes, RoutineId


@dataclass(frozen=True)
class CallGraph:
    """One node per routine; one ordered edge per call site.

    ``edges[a]`` is the body of ``a`` as a sequence of callee ids, so a caller
    invoking the same callee twice holds two edges to a single node.
    """

    ir: CircuitIR
    root: RoutineId
    nodes: tuple[RoutineId, ...]
    edges: Mapping[RoutineId, tuple[RoutineId, ...]]

    def name(self, rid: RoutineId) -> str:
        return self.ir.name_of(rid)

    def is_native(self, rid: RoutineId) -> bool:
        return self.ir[rid].is_native

    def duration(self, rid: RoutineId) -> float:
        return self.ir[rid].duration or 0.0

    @property
    def edge_count(self) -> int:
        return sum(len(callees) for callees in self.edges.values())


def build_call_graph(ir: CircuitIR, root: RoutineId | str | None = None) -> CallGraph:
    """Collect the routines reachable from ``root`` (default: the IR root)."""
    if root is None:
        root = ir.root
    elif isinstance(root, str):
        root = ir.id_of(root)
    seen = {root}
    order = [root]
    stack = [root]
    while stack:
        rid = stack.pop()
        for callee in ir[rid].body:
            if callee not in seen:
                seen.add(callee)
                order.append(callee)
                stack.append(callee)
    edges = {rid: ir[rid].body for rid in order}
    return CallGraph(ir, RoutineId(root), tuple(order), edges)


def _strongly_connected(graph: CallGraph) -> list[list[RoutineId]]:
    # Iterative Tarjan; components come out in reverse topological order.
    index: dict[RoutineId, int] = {}
    low: dict[RoutineId, int] = {}
    on_stack: set[RoutineId] = set()
    stack: list[RoutineId] = []
    components: list[list[RoutineId]] = []
    counter = 0

    for start in graph.nodes:
        if start in index:
            continue
        work = [(start, 0)]
        while work:
            node, pos = work.pop()
            if pos == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            callees = graph.edges[node]
            descended = False
            while pos < len(callees):
                callee = callees[pos]
                pos += 1
                if callee not in index:
                    work.append((node, pos))
                    work.append((callee, 0))
                    descended = True
                    break
                if callee in on_stack:
                    low[node] = min(low[node], index[callee])
            if descended:
                continue
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def _witness_cycle(graph: CallGraph, members: set[RoutineId], start: RoutineId) -> list[RoutineId]:
    # Shortest path start -> ... -> start inside the component (BFS).
    parent: dict[RoutineId, RoutineId] = {}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for callee in graph.edges[node]:
                if callee == start:
                    path = [node]
                    while path[-1] != start:
                        path.append(parent[path[-1]])
                    return path[::-1]
                if callee in members and callee not in parent:
                    parent[callee] = node
                    nxt.append(callee)
        frontier = nxt
    raise AssertionError("component without a cycle")


def detect_cycles(graph: CallGraph) -> list[list[str]]:
    """Return one witness cycle per recursive component; empty for a DAG.

    Each cycle is a list of routine names starting from the member discovered
    first; the closing edge back to the first name is implied.
    """
    position = {rid: i for i, rid in enumerate(graph.nodes)}
    cycles: list[tuple[int, list[str]]] = []
    for component in _strongly_connected(graph):
        if len(component) == 1:
            rid = component[0]
            if rid not in graph.edges[rid]:
                continue
        start = min(component, key=position.__getitem__)
        path = _witness_cycle(graph, set(component), start)
        cycles.append((position[start], [graph.name(rid) for rid in path]))
    cycles.sort(key=lambda item: item[0])
    return [names for _, names in cycles]


def _check_acyclic(graph: CallGraph) -> None:
    cycles = detect_cycles(graph)
    if cycles:
        raise RecursionUnsupported(cycles[0])


def topological_order(graph: CallGraph) -> list[RoutineId]:
    """Callers before callees. Raises RecursionUnsupported on cycles."""
    indegree = {rid: 0 for rid in graph.nodes}
    for rid in graph.nodes:
        for callee in set(graph.edges[rid]):
            indegree[callee] += 1
    ready = [rid for rid in graph.nodes if indegree[rid] == 0]
    order: list[RoutineId] = []
    while ready:
        rid = ready.pop()
        order.append(rid)
        for callee in dict.fromkeys(graph.edges[rid]):
            indegree[callee] -= 1
            if indegree[callee] == 0:
                ready.append(callee)
    if len(order) != len(graph.nodes):
        _check_acyclic(graph)
    return order


@dataclass(frozen=True)
class RoutineAggregate:
    native_counts: Mapping[str, int]
    total_time: float
    self_time: float

    def count(self, gate: str) -> int:
        return self.native_counts.get(gate, 0)


@dataclass(frozen=True)
class Aggregates:
    """Per-routine aggregates for every node of a call-graph.

    ``computations`` records how many aggregates were actually computed; with
    routine caching it equals the number of reachable routines.
    """

    per_routine: Mapping[RoutineId, RoutineAggregate]
    computations: int = field(default=0, compare=False)

    def __getitem__(self, rid: RoutineId) -> RoutineAggregate:
        return self.per_routine[rid]

    def __len__(self) -> int:
        return len(self.per_routine)


def _time_of(counts: Mapping[str, int], times: Mapping[str, float]) -> float:
    return float(sum(n * times[g] for g, n in sorted(counts.items())))


def aggregate(graph: CallGraph, times: GateTimes | None = None) -> Aggregates:
    """Native-gate histogram and execution time of every routine.

    Memoized post-order traversal: each node is computed once from the cached
    results of its callees, however many times it is called.
    """
    if times is None:
        times = graph.ir.gate_times
    results: dict[RoutineId, RoutineAggregate] = {}
    computations = 0
    # 0 = unvisited, 1 = on the current path, 2 = done
    state: dict[RoutineId, int] = {}
    work: list[tuple[RoutineId, bool]] = [(graph.root, False)]
    path: list[RoutineId] = []
    while work:
        rid, expanded = work.pop()
        if expanded:
            path.pop()
            state[rid] = 2
            counts: Counter[str] = Counter()
            for callee in graph.edges[rid]:
                counts.update(results[callee].native_counts)
            results[rid] = RoutineAggregate(dict(counts), _time_of(counts, times), 0.0)
            computations += 1
            continue
        status = state.get(rid, 0)
        if status == 2:
            continue
        if status == 1:
            start = path.index(rid)
            raise RecursionUnsupported([graph.name(r) for r in path[start:]])
        if graph.is_native(rid):
            name = graph.name(rid)
            duration = times[name]
            results[rid] = RoutineAggregate({name: 1}, duration, duration)
            state[rid] = 2
            computations += 1
            continue
        state[rid] = 1
        path.append(rid)
        work.append((rid, True))
        for callee in reversed(dict.fromkeys(graph.edges[rid])):
            if state.get(callee, 0) == 1:
                start = path.index(callee)
                raise RecursionUnsupported([graph.name(r) for r in path[start:]])
            if state.get(callee, 0) == 0:
                work.append((callee, False))
    return Aggregates(results, computations)


@dataclass(frozen=True)
class ExecCounts:
    """Dynamic call counts of the fully expanded program."""

    node_exec: Mapping[RoutineId, int]
    edge_calls: Mapping[tuple[RoutineId, RoutineId], int]


def propagate_exec_counts(graph: CallGraph) -> ExecCounts:
    """Forward-propagate execution counts from the root in topological order.

    Counts are Python integers, so deep repetition cannot overflow.
    """
    order = topological_order(graph)
    node_exec: dict[RoutineId, int] = {rid: 0 for rid in graph.nodes}
    node_exec[graph.root] = 1
    edge_calls: dict[tuple[RoutineId, RoutineId], int] = {}
    for rid in order:
        runs = node_exec[rid]
        for callee, occurrences in Counter(graph.edges[rid]).items():
            calls = runs * occurrences
            edge_calls[(rid, callee)] = calls
            node_exec[callee] += calls
    return ExecCounts(node_exec, edge_calls)
