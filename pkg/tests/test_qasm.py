from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circuit_profiler import aggregate, build_call_graph, load_qasm, lower_qasm, parse_qasm
from circuit_profiler.errors import (
    ArityMismatch,
    DuplicateRoutine,
    MissingVersionHeader,
    NativeGateWithoutTime,
    QasmSemanticError,
    QasmSyntaxError,
    UnknownGate,
    UnknownInclude,
)
from circuit_profiler.frontends import qasm_ast as ast
from circuit_profiler.frontends.qasm import qelib1_source
from circuit_profiler.frontends.qasm_ast import unparse

from conftest import CORPUS, IBM_TIMES, TOFFOLI
from oracles import macro_expand, qelib1_bodies


def calls_of(tree):
    return [s for s in tree.declarations if isinstance(s, ast.GateCall)]


def test_parse_toffoli_program():
    tree = parse_qasm(TOFFOLI)
    assert tree.version == "2.0"
    qregs = [s for s in tree.declarations if isinstance(s, ast.QregDecl)]
    assert qregs == [ast.QregDecl("q", 3)]
    calls = calls_of(tree)
    assert calls == [ast.GateCall("ccx", (), (ast.QubitRef("q", 0), ast.QubitRef("q", 1), ast.QubitRef("q", 2)))]
    assert "ccx" in tree.gate_defs and "h" in tree.gate_defs


def test_missing_version_header():
    with pytest.raises(MissingVersionHeader):
        parse_qasm("qreg q[2]; h q[0];")


def test_gate_definition_body():
    tree = parse_qasm("OPENQASM 2.0; qreg q[1]; gate g a { h a; h a; } g q[0];")
    g = tree.gate_defs["g"]
    assert g.qargs == ("a",)
    assert [c.name for c in g.body] == ["h", "h"]


def test_unknown_include():
    with pytest.raises(UnknownInclude) as info:
        parse_qasm('OPENQASM 2.0;\ninclude "other.inc";')
    assert info.value.name == "other.inc"
    assert info.value.line == 2


def test_syntax_error_position():
    with pytest.raises(QasmSyntaxError) as info:
        parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[0]\nx q[1];")
    assert (info.value.line, info.value.col) == (4, 1)


def test_positions_are_tracked():
    tree = parse_qasm("OPENQASM 2.0;\nqreg q[2];\n  opaque g a;\n  g q[1];")
    call = calls_of(tree)[0]
    assert (call.line, call.col) == (4, 3)


@pytest.mark.parametrize(
    "source, fragment",
    [
        ("OPENQASM 2.0; qreg q[1]; creg c[1]; if (c==1) x q[0];", "'if'"),
        ("OPENQASM 3.0;", "version"),
        ("OPENQASM 2.0; qreg q[1]; opaque g(t) a; g(sin(1)) q[0];", "function"),
        ("OPENQASM 2.0; qreg q[1]; opaque g(t) a; g(2^3) q[0];", "'^'"),
        ("OPENQASM 2.0; qreg q[1]; gate g a { h a;", "unterminated"),
        ("OPENQASM 2.0; qreg q[1]; x q[0]; $", "unexpected character"),
        ("OPENQASM 2.0; gate g a { measure a -> c[0]; }", "not allowed"),
    ],
)
def test_rejected_constructs(source, fragment):
    with pytest.raises(QasmSyntaxError) as info:
        parse_qasm(source)
    assert fragment in str(info.value)


def test_expression_precedence():
    tree = parse_qasm("OPENQASM 2.0; qreg q[1]; opaque g(t) a; g(-pi/2 + 3*(1-0.5)) q[0];")
    (expr,) = calls_of(tree)[0].params
    assert expr == ast.BinOp(
        "+",
        ast.BinOp("/", ast.Neg(ast.Pi()), ast.Num("2")),
        ast.BinOp("*", ast.Num("3"), ast.BinOp("-", ast.Num("1"), ast.Num("0.5"))),
    )


def test_unparse_round_trip_on_qelib1_and_corpus():
    for source in [TOFFOLI, "OPENQASM 2.0;\n" + qelib1_source(), *(p.read_text() for p in CORPUS.glob("*.qasm"))]:
        tree = parse_qasm(source)
        assert parse_qasm(unparse(tree)) == tree


# random expressions and programs for the parse/unparse property
_leaf = st.one_of(
    st.builds(ast.Num, st.sampled_from(["0", "1", "2", "0.5", "1e-3", ".25"])),
    st.just(ast.Pi()),
    st.builds(ast.ParamRef, st.sampled_from(["t", "phi"])),
)
_expr = st.recursive(
    _leaf,
    lambda inner: st.one_of(
        st.builds(ast.Neg, inner),
        st.builds(ast.BinOp, st.sampled_from("+-*/"), inner, inner),
    ),
    max_leaves=8,
)


@st.composite
def programs(draw):
    body = [
        ast.GateCall("opq", (draw(_expr), draw(_expr)), (ast.QubitRef("a"),))
        for _ in range(draw(st.integers(0, 3)))
    ]
    decls = [
        ast.OpaqueDecl("opq", ("t", "phi"), ("a",)),
        ast.GateDef("g", ("t", "phi"), ("a", "b"), tuple(body)),
        ast.QregDecl("q", 2),
    ]
    return ast.QasmAst("2.0", tuple(decls))


@settings(max_examples=100, deadline=None)
@given(programs())
def test_parse_unparse_stability(program):
    assert parse_qasm(unparse(program)) == program


def test_lower_toffoli_routines(ibm_times):
    ir = lower_qasm(parse_qasm(TOFFOLI), ibm_times)
    names = {r.name for r in ir.routines}
    assert names == {"main", "ccx", "h", "t", "tdg", "cx", "u1", "u2"}
    natives = {r.name for r in ir.routines if r.is_native}
    assert natives == {"cx", "u1", "u2"}
    assert ir.root_routine.name == "main"
    assert ir.qubit_count == 3


def test_lower_unknown_gate(ibm_times):
    with pytest.raises(UnknownGate) as info:
        load_qasm("OPENQASM 2.0; qreg q[1]; foo q[0];", ibm_times)
    assert info.value.name == "foo"
    assert info.value.line == 1


def test_lower_arity_mismatch(ibm_times):
    with pytest.raises(ArityMismatch) as info:
        load_qasm('OPENQASM 2.0; include "qelib1.inc"; qreg q[2]; cx q[0];', ibm_times)
    assert (info.value.name, info.value.expected, info.value.got) == ("cx", 2, 1)


def test_lower_parameter_arity(ibm_times):
    with pytest.raises(ArityMismatch) as info:
        load_qasm('OPENQASM 2.0; include "qelib1.inc"; qreg q[1]; u1 q[0];', ibm_times)
    assert info.value.what == "parameter"


def test_gate_must_be_defined_before_use(ibm_times):
    with pytest.raises(UnknownGate):
        load_qasm("OPENQASM 2.0; qreg q[1]; g q[0]; gate g a { U(0,0,0) a; }", ibm_times)


@pytest.mark.parametrize(
    "body",
    [
        "qreg q[1]; h r[0];",
        "qreg q[1]; h q[1];",
        "qreg q[2]; cx q[0], q[0];",
        "qreg q[2]; qreg r[3]; cx q, r;",
        "qreg q[1]; gate g a { h b; }",
        "qreg q[1]; gate g(t) a { u1(s) a; }",
        "qreg q[1]; u1(t) q[0];",
        "qreg q[1]; creg c[2]; measure q -> c;",
        "qreg q[1]; qreg q[2];",
    ],
)
def test_semantic_errors(body, ibm_times):
    with pytest.raises(QasmSemanticError):
        load_qasm('OPENQASM 2.0; include "qelib1.inc"; ' + body, ibm_times)


def test_redefinition_rejected(ibm_times):
    with pytest.raises(DuplicateRoutine):
        load_qasm('OPENQASM 2.0; include "qelib1.inc"; gate h a { U(0,0,0) a; }', ibm_times)
    with pytest.raises(DuplicateRoutine):
        load_qasm("OPENQASM 2.0; gate main a { U(0,0,0) a; }", ibm_times)


def test_broadcast_expands_register_calls(ibm_times):
    ir = load_qasm('OPENQASM 2.0; include "qelib1.inc"; qreg a[3]; qreg b[3]; h a; cx a, b; cx a[0], b;', ibm_times)
    assert [ir.name_of(c) for c in ir.root_routine.body] == ["h"] * 3 + ["cx"] * 6


def test_top_level_call_order_preserved(ibm_times):
    src = 'OPENQASM 2.0; include "qelib1.inc"; qreg q[2]; t q[0]; h q[1]; cx q[0],q[1]; barrier q; t q[1]; s q[0];'
    ir = load_qasm(src, ibm_times)
    assert [ir.name_of(c) for c in ir.root_routine.body] == ["t", "h", "cx", "t", "s"]


def test_measure_and_reset_are_native_with_default_zero(ibm_times):
    src = 'OPENQASM 2.0; include "qelib1.inc"; qreg q[2]; creg c[2]; reset q; h q[0]; measure q -> c;'
    ir = load_qasm(src, ibm_times)
    assert [ir.name_of(c) for c in ir.root_routine.body] == ["reset", "reset", "h", "measure", "measure"]
    assert ir[ir.id_of("measure")].duration == 0.0
    priced = load_qasm(src, {**IBM_TIMES, "measure": 1000.0})
    assert priced[priced.id_of("measure")].duration == 1000.0


def test_builtin_u_priced_as_u3():
    ir = load_qasm("OPENQASM 2.0; qreg q[1]; U(0,0,0) q[0];", {"u3": 70.0})
    assert ir[ir.id_of("U")].duration == 70.0


def test_builtin_without_time():
    with pytest.raises(NativeGateWithoutTime) as info:
        load_qasm("OPENQASM 2.0; qreg q[2]; CX q[0], q[1];", {"u3": 70.0})
    assert info.value.name == "CX"


def test_opaque_without_time():
    with pytest.raises(NativeGateWithoutTime):
        load_qasm("OPENQASM 2.0; opaque g a; qreg q[1]; g q[0];", {"u3": 70.0})


def test_unreached_opaque_needs_no_time():
    ir = load_qasm("OPENQASM 2.0; opaque g a; qreg q[1]; U(0,0,0) q[0];", {"u3": 70.0})
    assert {r.name for r in ir.routines} == {"main", "U"}


NATIVE = set(IBM_TIMES) | {"U", "CX"}
QELIB1_GATES = sorted(qelib1_bodies())


def _apply_once(name):
    defs = parse_qasm('OPENQASM 2.0; include "qelib1.inc";').gate_defs
    gate = defs[name]
    params = ", ".join("0.1" for _ in gate.params)
    qubits = ", ".join(f"q[{i}]" for i in range(len(gate.qargs)))
    head = f"{name}({params})" if params else name
    return len(gate.qargs), f"{head} {qubits}"


@pytest.mark.parametrize("name", QELIB1_GATES)
def test_qelib1_gate_matches_macro_expansion(name):
    width, stmt = _apply_once(name)
    source = f'OPENQASM 2.0; include "qelib1.inc"; qreg q[{width}]; {stmt};'
    ir = load_qasm(source, IBM_TIMES)
    graph = build_call_graph(ir)
    counts = aggregate(graph)[graph.root].native_counts
    assert Counter(counts) == macro_expand(f"{name} a;", NATIVE)


def test_macro_oracle_frozen_toffoli_values():
    # hand count of the qelib1 ccx body: 6 cx, 2 h -> u2, 4 t + 3 tdg -> u1
    assert macro_expand("ccx a,b,c;", NATIVE) == Counter({"cx": 6, "u2": 2, "u1": 7})
