"""JSON interchange format: a routine table produced by any external tool.

Example::

    {"root": "main",
     "routines": [{"name": "main", "body": ["ccx", "ccx"]},
                  {"name": "ccx", "body": ["h", "cx", "t"]}]}

Names that are not defined in ``routines`` must be keys of the gate times;
a defined routine whose name is a gate-times key is treated as native.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

import jsonschema

from ..errors import DuplicateRoutine, SchemaError, UnknownGate
from ..model import CircuitIR, GateTimes, TableRoutine, build_ir, validate_gate_times

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["root", "routines"],
    "additionalProperties": False,
    "properties": {
        "root": {"type": "string", "minLength": 1},
        "routines": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "body"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "body": {"type": "array", "items": {"type": "string", "minLength": 1}},
                },
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _json_path(path) -> str:
    out = "$"
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def validate_interchange(doc: object) -> None:
    error = jsonschema.exceptions.best_match(_VALIDATOR.iter_errors(doc))
    if error is not None:
        raise SchemaError(_json_path(error.absolute_path), error.message)


def interchange_from_ir(ir: CircuitIR) -> dict[str, Any]:
    """Serialise the composite routines of an IR to interchange form."""
    return {
        "root": ir.root_routine.name,
        "routines": [
            {"name": r.name, "body": [ir.name_of(c) for c in r.body]}
            for r in ir.routines
            if not r.is_native
        ],
    }


def load_interchange(doc: Mapping[str, Any], times: Mapping[str, float]) -> CircuitIR:
    """Build an IR from an already-decoded interchange document."""
    if not isinstance(times, GateTimes):
        times = validate_gate_times(times)
    validate_interchange(doc)
    table: dict[str, list[str]] = {}
    for routine in doc["routines"]:
        name = routine["name"]
        if name in table:
            raise DuplicateRoutine(name)
        table[name] = list(routine["body"])
    for routine in doc["routines"]:
        for callee in routine["body"]:
            if callee not in table and callee not in times:
                raise UnknownGate(callee)
    root = doc["root"]
    if root not in table and root not in times:
        raise UnknownGate(root)
    return build_ir(TableRoutine(root, table), times)


def parse_interchange(source: str, times: Mapping[str, float]) -> CircuitIR:
    """Parse interchange JSON text into a :class:`CircuitIR`."""
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON at line {exc.lineno}, col {exc.colno}: {exc.msg}") from exc
    return load_interchange(doc, times)
