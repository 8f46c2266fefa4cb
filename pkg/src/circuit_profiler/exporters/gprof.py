"""gprof-compatible text report.

The layout follows GNU gprof closely enough that gprof2dot can read the call
graph section. Column headers keep their original wording ("seconds",
"ms/call") even though times are in whatever unit the gate times use.
"""

from __future__ import annotations

from ..report import FlatCallTree, FlatEntry, self_percent, total_percent

SEPARATOR = "-" * 47


def _flat_profile(tree: FlatCallTree) -> list[str]:
    # Only native routines execute on hardware, so only they get a row;
    # composites appear in the call graph section.
    lines = [
        "Flat profile:",
        "",
        "Each sample counts as 1 time unit.",
        f"{'%':^6} {'cumulative':>10} {'self':>9} {'':>8} {'self':>8} {'total':>8}",
        f"{'time':>6} {'seconds':>10} {'seconds':>9} {'calls':>8} {'ms/call':>8} {'ms/call':>8}  name",
    ]
    cumulative = 0.0
    for entry in tree.entries:
        if entry.callees:
            continue
        cumulative += entry.self_time
        lines.append(
            f"{self_percent(entry, tree):6.2f} {cumulative:10.2f} {entry.self_time:9.2f}"
            f" {entry.exec_count:8d} {entry.self_time / entry.exec_count:8.2f}"
            f" {entry.total_time / entry.exec_count:8.2f}  {entry.name}"
        )
    return lines


def _arc_line(self_contrib: float, children_contrib: float, called: str, name: str, index: int) -> str:
    return f"{'':13}{self_contrib:12.2f}{children_contrib:12.2f}{called:>11}         {name} [{index}]"


def _entry_block(entry: FlatEntry, tree: FlatCallTree, index_of: dict[str, int], exec_of: dict[str, int]) -> list[str]:
    lines = []
    if not entry.callers:
        lines.append(f"{'':45}<spontaneous>")
    for rec in entry.callers:
        lines.append(
            _arc_line(rec.self_contrib, rec.children_contrib, f"{rec.calls}/{entry.exec_count}", rec.name, index_of[rec.name])
        )
    tag = f"[{entry.index}]"
    lines.append(
        f"{tag:<6}{total_percent(entry, tree):7.2f}{entry.self_time:12.2f}"
        f"{entry.children_time:12.2f}{entry.exec_count:>11}     {entry.name} {tag}"
    )
    for rec in entry.callees:
        lines.append(
            _arc_line(rec.self_contrib, rec.children_contrib, f"{rec.calls}/{exec_of[rec.name]}", rec.name, index_of[rec.name])
        )
    lines.append(SEPARATOR)
    return lines


def _call_graph(tree: FlatCallTree) -> list[str]:
    index_of = {e.name: e.index for e in tree.entries}
    exec_of = {e.name: e.exec_count for e in tree.entries}
    lines = [
        "\t\t     Call graph",
        "",
        "",
        f"{'index':<6}{'% time':>7}{'self':>12}{'children':>12}{'called':>11}     name",
    ]
    for entry in tree.entries:
        lines.extend(_entry_block(entry, tree, index_of, exec_of))
    return lines


def _preamble(tree: FlatCallTree) -> list[str]:
    lines = [
        "Quantum circuit profile",
        "time unit: as configured",
        f"qubits: {tree.qubit_count}",
        f"total time: {tree.total_time:.2f}",
        "gate times:",
    ]
    width = max(len(name) for name in tree.gate_times)
    for name in sorted(tree.gate_times):
        lines.append(f"    {name:<{width}}  {tree.gate_times[name]!r}")
    return lines


def _name_index(tree: FlatCallTree) -> list[str]:
    lines = ["Index by function name", ""]
    for entry in sorted(tree.entries, key=lambda e: e.name):
        lines.append(f"{'[%d]' % entry.index:>6} {entry.name}")
    return lines


def export_gprof(tree: FlatCallTree) -> str:
    """Render ``tree`` as a gprof report (flat profile, then call graph)."""
    lines = [
        *_preamble(tree),
        "",
        *_flat_profile(tree),
        "",
        "",
        *_call_graph(tree),
        "\f",
        *_name_index(tree),
    ]
    return "\n".join(line.rstrip() if line != "\f" else line for line in lines) + "\n"
