from __future__ import annotations

import json

import pytest

from circuit_profiler import load_qasm, parse_interchange
from circuit_profiler.errors import DuplicateRoutine, EmptyComposite, SchemaError, UnknownGate
from circuit_profiler.frontends.interchange import interchange_from_ir

from conftest import CORPUS, IBM_TIMES, TOFFOLI


def test_simple_circuit():
    ir = parse_interchange('{"root":"main","routines":[{"name":"main","body":["x","x"]}]}', {"x": 1})
    x = ir.id_of("x")
    assert not ir.root_routine.is_native
    assert ir[x].is_native
    assert ir.root_routine.body == (x, x)


def test_cycle_is_accepted():
    ir = parse_interchange((CORPUS / "recursive.json").read_text(), {"x": 1})
    a, b = ir.id_of("a"), ir.id_of("b")
    assert ir[a].body == (b,) and ir[b].body == (a,)


def test_duplicate_routine():
    doc = {"root": "a", "routines": [{"name": "a", "body": ["x"]}, {"name": "a", "body": ["x"]}]}
    with pytest.raises(DuplicateRoutine) as info:
        parse_interchange(json.dumps(doc), {"x": 1})
    assert info.value.name == "a"


def test_unknown_callee():
    with pytest.raises(UnknownGate) as info:
        parse_interchange('{"root":"a","routines":[{"name":"a","body":["y"]}]}', {"x": 1})
    assert info.value.name == "y"


def test_unknown_root():
    with pytest.raises(UnknownGate):
        parse_interchange('{"root":"b","routines":[{"name":"a","body":["x"]}]}', {"x": 1})


def test_root_may_be_a_native_gate():
    ir = parse_interchange('{"root":"x","routines":[]}', {"x": 1})
    assert len(ir) == 1 and ir.root_routine.is_native


def test_empty_body_rejected_when_reached():
    with pytest.raises(EmptyComposite):
        parse_interchange('{"root":"a","routines":[{"name":"a","body":[]}]}', {"x": 1})


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"routines": []}, "$"),
        ({"root": "a", "routines": [], "extra": 1}, "$"),
        ({"root": "a", "routines": [{"name": "a", "body": ["x"], "params": []}]}, "$.routines[0]"),
        ({"root": "a", "routines": [{"name": "a", "body": [3]}]}, "$.routines[0].body[0]"),
        ({"root": 1, "routines": []}, "$.root"),
        ([], "$"),
    ],
)
def test_schema_errors(doc, path):
    with pytest.raises(SchemaError) as info:
        parse_interchange(json.dumps(doc), {"x": 1})
    assert info.value.path == path


def test_invalid_json():
    with pytest.raises(SchemaError):
        parse_interchange("{", {"x": 1})


def test_round_trip_through_qasm_ir():
    ir = load_qasm(TOFFOLI, IBM_TIMES)
    again = parse_interchange(json.dumps(interchange_from_ir(ir)), IBM_TIMES)
    assert {r.name: [again.name_of(c) for c in r.body] for r in again.routines} == {
        r.name: [ir.name_of(c) for c in r.body] for r in ir.routines
    }
