"""JSON form of the flat call-tree, and its inverse."""

from __future__ import annotations

import json
from typing import Any

import jsonschema

from ..errors import SchemaError
from ..model import GateTimes
from ..report import CallRecord, FlatCallTree, FlatEntry

_ARC = {
    "type": "object",
    "required": ["name", "calls", "self", "children"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "calls": {"type": "integer", "minimum": 1},
        "self": {"type": "number"},
        "children": {"type": "number"},
    },
}

REPORT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["total_time", "qubit_count", "gate_times", "routines"],
    "additionalProperties": False,
    "properties": {
        "total_time": {"type": "number", "minimum": 0},
        "qubit_count": {"type": "integer", "minimum": 0},
        "gate_times": {"type": "object", "additionalProperties": {"type": "number"}},
        "routines": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "name", "exec_count", "self_time", "children_time", "callers", "callees"],
                "additionalProperties": False,
                "properties": {
                    "index": {"type": "integer", "minimum": 1},
                    "name": {"type": "string"},
                    "exec_count": {"type": "integer", "minimum": 1},
                    "self_time": {"type": "number"},
                    "children_time": {"type": "number"},
                    "callers": {"type": "array", "items": _ARC},
                    "callees": {"type": "array", "items": _ARC},
                },
            },
        },
    },
}


def _arc_to_dict(rec: CallRecord) -> dict[str, Any]:
    return {"name": rec.name, "calls": rec.calls, "self": rec.self_contrib, "children": rec.children_contrib}


def _arc_from_dict(doc: dict[str, Any]) -> CallRecord:
    return CallRecord(doc["name"], doc["calls"], float(doc["self"]), float(doc["children"]))


def tree_to_dict(tree: FlatCallTree) -> dict[str, Any]:
    return {
        "total_time": tree.total_time,
        "qubit_count": tree.qubit_count,
        "gate_times": tree.gate_times.to_dict(),
        "routines": [
            {
                "index": e.index,
                "name": e.name,
                "exec_count": e.exec_count,
                "self_time": e.self_time,
                "children_time": e.children_time,
                "callers": [_arc_to_dict(r) for r in e.callers],
                "callees": [_arc_to_dict(r) for r in e.callees],
            }
            for e in tree.entries
        ],
    }


def tree_from_dict(doc: Any) -> FlatCallTree:
    error = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(REPORT_SCHEMA).iter_errors(doc))
    if error is not None:
        path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in error.absolute_path)
        raise SchemaError(path, error.message)
    entries = tuple(
        FlatEntry(
            index=r["index"],
            name=r["name"],
            exec_count=r["exec_count"],
            self_time=float(r["self_time"]),
            children_time=float(r["children_time"]),
            callers=tuple(_arc_from_dict(a) for a in r["callers"]),
            callees=tuple(_arc_from_dict(a) for a in r["callees"]),
        )
        for r in doc["routines"]
    )
    return FlatCallTree(entries, float(doc["total_time"]), doc["qubit_count"], GateTimes(doc["gate_times"]))


def export_json(tree: FlatCallTree) -> str:
    return json.dumps(tree_to_dict(tree), sort_keys=True, indent=2) + "\n"


def parse_json_report(text: str) -> FlatCallTree:
    """Inverse of :func:`export_json`."""
    return tree_from_dict(json.loads(text))
