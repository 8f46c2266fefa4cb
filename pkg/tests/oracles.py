"""Independent reference computations used to check the profiler.

None of these touch the IR, call-graph or report code: they work directly
on raw definition tables or on QASM text.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from pathlib import Path

QELIB1 = Path(__file__).resolve().parents[1] / "src" / "circuit_profiler" / "frontends" / "qelib1.inc"


def expand(table, natives, name):
    """Yield native gate names of the full, unshared expansion of ``name``."""
    if name in natives:
        yield name
        return
    for callee in table[name]:
        yield from expand(table, natives, callee)


def naive_profile(table, times, root):
    """Counts, total time and dynamic call counts by brute-force expansion."""
    counts = Counter()
    exec_counts = Counter({root: 1})
    edge_calls = Counter()
    total = 0.0

    def visit(name):
        nonlocal total
        if name in times:
            counts[name] += 1
            total += times[name]
            return
        for callee in table[name]:
            exec_counts[callee] += 1
            edge_calls[(name, callee)] += 1
            visit(callee)

    visit(root)
    return counts, total, exec_counts, edge_calls


def _strip_comments(text):
    return re.sub(r"//[^\n]*", "", text)


def qelib1_bodies(text=None):
    """Map gate name -> body text, extracted from qelib1 by regex."""
    text = _strip_comments(text if text is not None else QELIB1.read_text())
    bodies = {}
    for m in re.finditer(r"gate\s+(\w+)[^{]*\{([^}]*)\}", text):
        bodies[m.group(1)] = m.group(2)
    return bodies


def _statement_name(stmt):
    return re.match(r"\s*(\w+)", stmt).group(1)


def macro_expand(program, natives, bodies=None):
    """Repeatedly substitute gate calls by their bodies until only natives remain.

    Operates on text; returns a Counter of native gate names.
    """
    bodies = bodies if bodies is not None else qelib1_bodies()
    statements = [s for s in program.split(";") if s.strip()]
    changed = True
    while changed:
        changed = False
        out = []
        for stmt in statements:
            name = _statement_name(stmt)
            if name in natives:
                out.append(stmt)
            else:
                out.extend(s for s in bodies[name].split(";") if s.strip())
                changed = True
        statements = out
    return Counter(_statement_name(s) for s in statements)


def random_dag(rng: random.Random, max_routines=8, max_body=5):
    """Random acyclic routine table.

    Routines are numbered; composite ``r{i}`` only calls lower-numbered
    routines, so the table is a DAG. Returns ``(table, times, root)``.
    """
    n = rng.randint(1, max_routines)
    n_native = rng.randint(1, min(3, n))
    times = {f"g{i}": float(rng.choice([0, 1, 2.5, 35, 300, rng.uniform(0, 100)])) for i in range(n_native)}
    names = list(times) + [f"r{i}" for i in range(n - n_native)]
    table = {}
    for i in range(n_native, n):
        body_len = rng.randint(1, max_body)
        table[names[i]] = [names[rng.randrange(i)] for _ in range(body_len)]
    return table, times, names[-1]
