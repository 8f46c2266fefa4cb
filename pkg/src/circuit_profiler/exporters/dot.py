"""Graphviz DOT rendering of the flat call-tree."""

from __future__ import annotations

from dataclasses import dataclass

from ..report import FlatCallTree, self_percent, total_percent


@dataclass(frozen=True)
class DotThresholds:
    """Nodes below ``node_percent`` of total time are dropped, and edges at
    or below ``edge_percent``."""

    node_percent: float = 0.5
    edge_percent: float = 0.1

    def __post_init__(self) -> None:
        for label, value in (("node", self.node_percent), ("edge", self.edge_percent)):
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"{label} threshold must be within [0, 100], got {value!r}")


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _quote(text: str) -> str:
    return f'"{_escape(text)}"'


def export_dot(tree: FlatCallTree, thresholds: DotThresholds | None = None) -> str:
    th = thresholds or DotThresholds()
    shown = set()
    lines = [
        "digraph callgraph {",
        '  graph [fontname="Helvetica", nodesep=0.25, ranksep=0.5];',
        '  node [shape=box, fontname="Helvetica"];',
        '  edge [fontname="Helvetica"];',
    ]
    for entry in tree.entries:
        pct = total_percent(entry, tree)
        if pct < th.node_percent:
            continue
        shown.add(entry.name)
        label = "\\n".join(
            [_escape(entry.name), f"{pct:.2f}%", f"({self_percent(entry, tree):.2f}%)", f"{entry.exec_count}×"]
        )
        lines.append(f'  {_quote(entry.name)} [label="{label}"];')
    for entry in tree.entries:
        if entry.name not in shown:
            continue
        for rec in entry.callees:
            pct = tree.percent(rec.total)
            if pct <= th.edge_percent or rec.name not in shown:
                continue
            lines.append(
                f"  {_quote(entry.name)} -> {_quote(rec.name)} [label={_quote(f'calls {rec.calls} / {pct:.2f}%')}];"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
