"""OpenQASM 2.0 subset: tokenizer, recursive-descent parser and lowering.

Supported: ``include "qelib1.inc"``, ``qreg``/``creg``, ``gate`` and
``opaque`` definitions, gate calls (with register broadcasting), ``barrier``,
``measure`` and ``reset``. Parameter expressions are limited to numeric
literals, ``pi``, gate parameters, ``+ - * /``, unary minus and parentheses.
``if`` is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterator, Mapping

from ..errors import (
    ArityMismatch,
    DuplicateRoutine,
    MissingVersionHeader,
    NativeGateWithoutTime,
    QasmSemanticError,
    QasmSyntaxError,
    UnknownGate,
    UnknownInclude,
)
from ..model import CircuitIR, GateTimes, TableRoutine, build_ir, validate_gate_times
from .qasm_ast import (
    Barrier,
    BinOp,
    CregDecl,
    Expr,
    GateCall,
    GateDef,
    Include,
    Measure,
    Neg,
    Num,
    OpaqueDecl,
    ParamRef,
    Pi,
    QasmAst,
    QregDecl,
    QubitRef,
    Reset,
    Statement,
)

ROOT_NAME = "main"
SUPPORTED_VERSION = "2.0"

# Builtin name -> (gate-times key, parameter count, qubit count)
BUILTINS: dict[str, tuple[str, int, int]] = {
    "U": ("u3", 3, 1),
    "CX": ("cx", 0, 2),
}
MEASURE = "measure"
RESET = "reset"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<newline>\n)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<symbol>->|==|[;,()\[\]{}+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(source: str) -> Iterator[Token]:
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise QasmSyntaxError(
                f"unexpected character {source[pos]!r}", line, pos - line_start + 1
            )
        kind = match.lastgroup
        assert kind is not None
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind not in ("ws", "comment"):
            yield Token(kind, match.group(), line, pos - line_start + 1)
        pos = match.end()
    yield Token("eof", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, source: str, *, library: bool = False) -> None:
        self.tokens = list(tokenize(source))
        self.pos = 0
        self.library = library

    # -- token helpers --

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> QasmSyntaxError:
        tok = tok or self.tok
        return QasmSyntaxError(message, tok.line, tok.col)

    def describe(self, tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.value)

    def at(self, value: str) -> bool:
        return self.tok.kind in ("symbol", "id") and self.tok.value == value

    def expect(self, value: str) -> Token:
        if not self.at(value):
            raise self.error(f"expected {value!r}, found {self.describe(self.tok)}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {what}, found {self.describe(self.tok)}")
        return self.advance()

    def identifier(self) -> Token:
        return self.expect_kind("id", "an identifier")

    # -- grammar --

    def program(self) -> QasmAst:
        version = SUPPORTED_VERSION
        if not self.library:
            if not self.at("OPENQASM"):
                raise MissingVersionHeader(self.tok.line, self.tok.col)
            self.advance()
            tok = self.tok
            if tok.kind not in ("real", "int"):
                raise self.error(f"expected a version number, found {self.describe(tok)}")
            self.advance()
            if tok.value != SUPPORTED_VERSION:
                raise self.error(f"unsupported OpenQASM version {tok.value}", tok)
            version = tok.value
            self.expect(";")
        statements = []
        while self.tok.kind != "eof":
            statements.append(self.statement())
        return QasmAst(version, tuple(statements))

    def statement(self) -> Statement:
        tok = self.tok
        if tok.kind != "id":
            raise self.error(f"expected a statement, found {self.describe(tok)}")
        keyword = tok.value
        if keyword == "OPENQASM":
            raise self.error("duplicate version header")
        if keyword == "include":
            return self.include()
        if keyword in ("qreg", "creg"):
            return self.register()
        if keyword == "gate":
            return self.gate_def()
        if keyword == "opaque":
            return self.opaque()
        if keyword == "measure":
            self.advance()
            qarg = self.argument()
            self.expect("->")
            carg = self.argument()
            self.expect(";")
            return Measure(qarg, carg, tok.line, tok.col)
        if keyword == "reset":
            self.advance()
            qarg = self.argument()
            self.expect(";")
            return Reset(qarg, tok.line, tok.col)
        if keyword == "if":
            raise self.error("'if' statements are not supported")
        if keyword == "barrier":
            return self.barrier(indexed=True)
        return self.call(indexed=True)

    def include(self) -> Include:
        tok = self.advance()
        name_tok = self.expect_kind("string", "a file name string")
        self.expect(";")
        name = name_tok.value[1:-1]
        if name != "qelib1.inc":
            raise UnknownInclude(name, name_tok.line, name_tok.col)
        return Include(name, _qelib1_declarations(), tok.line, tok.col)

    def register(self) -> QregDecl | CregDecl:
        tok = self.advance()
        name = self.identifier().value
        self.expect("[")
        size = int(self.expect_kind("int", "a register size").value)
        self.expect("]")
        self.expect(";")
        if size <= 0:
            raise QasmSyntaxError(f"register {name!r} must have a positive size", tok.line, tok.col)
        cls = QregDecl if tok.value == "qreg" else CregDecl
        return cls(name, size, tok.line, tok.col)

    def id_list(self) -> tuple[str, ...]:
        names = [self.identifier().value]
        while self.at(","):
            self.advance()
            names.append(self.identifier().value)
        return tuple(names)

    def signature(self) -> tuple[str, tuple[str, ...], tuple[str, ...]]:
        name = self.identifier().value
        params: tuple[str, ...] = ()
        if self.at("("):
            self.advance()
            if not self.at(")"):
                params = self.id_list()
            self.expect(")")
        qargs = self.id_list()
        return name, params, qargs

    def gate_def(self) -> GateDef:
        tok = self.advance()
        name, params, qargs = self.signature()
        self.expect("{")
        body: list[GateCall | Barrier] = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error(f"unterminated body of gate {name!r}")
            if self.at("barrier"):
                body.append(self.barrier(indexed=False))
            elif self.tok.kind == "id" and self.tok.value in ("measure", "reset", "if", "gate", "opaque", "qreg", "creg"):
                raise self.error(f"{self.tok.value!r} is not allowed inside a gate body")
            else:
                body.append(self.call(indexed=False))
        self.expect("}")
        return GateDef(name, params, qargs, tuple(body), tok.line, tok.col)

    def opaque(self) -> OpaqueDecl:
        tok = self.advance()
        name, params, qargs = self.signature()
        self.expect(";")
        return OpaqueDecl(name, params, qargs, tok.line, tok.col)

    def argument(self, indexed: bool = True) -> QubitRef:
        name = self.identifier().value
        if indexed and self.at("["):
            self.advance()
            index = int(self.expect_kind("int", "a register index").value)
            self.expect("]")
            return QubitRef(name, index)
        return QubitRef(name)

    def arguments(self, indexed: bool) -> tuple[QubitRef, ...]:
        args = [self.argument(indexed)]
        while self.at(","):
            self.advance()
            args.append(self.argument(indexed))
        return tuple(args)

    def barrier(self, indexed: bool) -> Barrier:
        tok = self.advance()
        args = self.arguments(indexed)
        self.expect(";")
        return Barrier(args, tok.line, tok.col)

    def call(self, indexed: bool) -> GateCall:
        tok = self.identifier()
        params: tuple[Expr, ...] = ()
        if self.at("("):
            self.advance()
            if not self.at(")"):
                exprs = [self.expression()]
                while self.at(","):
                    self.advance()
                    exprs.append(self.expression())
                params = tuple(exprs)
            self.expect(")")
        args = self.arguments(indexed)
        self.expect(";")
        return GateCall(tok.value, params, args, tok.line, tok.col)

    # expression := term (('+'|'-') term)*
    def expression(self) -> Expr:
        expr = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().value
            expr = BinOp(op, expr, self.term())
        return expr

    # term := unary (('*'|'/') unary)*
    def term(self) -> Expr:
        expr = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance().value
            expr = BinOp(op, expr, self.unary())
        return expr

    def unary(self) -> Expr:
        if self.at("-"):
            self.advance()
            return Neg(self.unary())
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.primary()

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind in ("int", "real"):
            self.advance()
            return Num(tok.value)
        if tok.kind == "id":
            self.advance()
            if self.at("("):
                raise self.error(f"function {tok.value!r} is not supported in parameter expressions", tok)
            return Pi() if tok.value == "pi" else ParamRef(tok.value)
        if self.at("("):
            self.advance()
            expr = self.expression()
            self.expect(")")
            return expr
        if self.at("^"):
            raise self.error("'^' is not supported in parameter expressions")
        raise self.error(f"expected an expression, found {self.describe(tok)}")


@lru_cache(maxsize=None)
def qelib1_source() -> str:
    return resources.files(__package__).joinpath("qelib1.inc").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _qelib1_declarations() -> tuple[Statement, ...]:
    return _Parser(qelib1_source(), library=True).program().declarations


def parse_qasm(source: str) -> QasmAst:
    """Parse OpenQASM 2.0 source into a :class:`QasmAst`."""
    return _Parser(source).program()


# -- lowering -----------------------------------------------------------------


@dataclass(frozen=True)
class _GateSig:
    params: int
    qargs: int


def _check_expr(expr: Expr, allowed: frozenset[str], line: int, col: int) -> None:
    if isinstance(expr, ParamRef):
        if expr.name not in allowed:
            raise QasmSemanticError(f"unknown parameter {expr.name!r}", line, col)
    elif isinstance(expr, Neg):
        _check_expr(expr.operand, allowed, line, col)
    elif isinstance(expr, BinOp):
        _check_expr(expr.left, allowed, line, col)
        _check_expr(expr.right, allowed, line, col)


class _Lowering:
    def __init__(self) -> None:
        self.qregs: dict[str, int] = {}
        self.cregs: dict[str, int] = {}
        self.gates: dict[str, _GateSig] = {
            name: _GateSig(nparams, nqubits) for name, (_, nparams, nqubits) in BUILTINS.items()
        }
        self.table: dict[str, list[str]] = {}
        self.main: list[str] = []

    def check_call(self, call: GateCall) -> None:
        sig = self.gates.get(call.name)
        if sig is None:
            raise UnknownGate(call.name, call.line, call.col)
        if len(call.params) != sig.params:
            raise ArityMismatch(
                call.name, sig.params, len(call.params), call.line, call.col, what="parameter"
            )
        if len(call.qargs) != sig.qargs:
            raise ArityMismatch(call.name, sig.qargs, len(call.qargs), call.line, call.col)

    def declare(self, name: str, sig: _GateSig, line: int, col: int) -> None:
        if name in self.gates or name in (ROOT_NAME, MEASURE, RESET):
            raise DuplicateRoutine(name, line, col)
        self.gates[name] = sig

    def gate_def(self, gate: GateDef) -> None:
        for names, what in ((gate.params, "parameter"), (gate.qargs, "qubit argument")):
            if len(set(names)) != len(names):
                raise QasmSemanticError(f"gate {gate.name!r} repeats a {what} name", gate.line, gate.col)
        formal_params = frozenset(gate.params)
        formal_qargs = set(gate.qargs)
        body: list[str] = []
        for op in gate.body:
            for ref in op.qargs:
                if ref.register not in formal_qargs:
                    raise QasmSemanticError(
                        f"{ref.register!r} is not an argument of gate {gate.name!r}", op.line, op.col
                    )
            if isinstance(op, Barrier):
                continue
            self.check_call(op)
            if len({q.register for q in op.qargs}) != len(op.qargs):
                raise QasmSemanticError(f"repeated qubit argument in call to {op.name!r}", op.line, op.col)
            for expr in op.params:
                _check_expr(expr, formal_params, op.line, op.col)
            body.append(op.name)
        self.declare(gate.name, _GateSig(len(gate.params), len(gate.qargs)), gate.line, gate.col)
        self.table[gate.name] = body

    def resolve(self, ref: QubitRef, registers: Mapping[str, int], kind: str, line: int, col: int) -> list[tuple[str, int]]:
        size = registers.get(ref.register)
        if size is None:
            raise QasmSemanticError(f"unknown {kind} register {ref.register!r}", line, col)
        if ref.index is None:
            return [(ref.register, i) for i in range(size)]
        if not 0 <= ref.index < size:
            raise QasmSemanticError(
                f"index {ref.index} out of range for register {ref.register!r} of size {size}", line, col
            )
        return [(ref.register, ref.index)]

    def broadcast(self, refs: list[list[tuple[str, int]]], what: str, line: int, col: int) -> int:
        sizes = {len(r) for r in refs if len(r) != 1}
        if len(sizes) > 1:
            raise QasmSemanticError(f"register sizes differ in {what}", line, col)
        width = sizes.pop() if sizes else 1
        for i in range(width):
            qubits = [r[i] if len(r) > 1 else r[0] for r in refs]
            if len(set(qubits)) != len(qubits):
                raise QasmSemanticError(f"repeated qubit argument in {what}", line, col)
        return width

    def statement(self, stmt: Statement) -> None:
        if isinstance(stmt, QregDecl) or isinstance(stmt, CregDecl):
            if stmt.name in self.qregs or stmt.name in self.cregs:
                raise QasmSemanticError(f"register {stmt.name!r} declared twice", stmt.line, stmt.col)
            target = self.qregs if isinstance(stmt, QregDecl) else self.cregs
            target[stmt.name] = stmt.size
        elif isinstance(stmt, GateDef):
            self.gate_def(stmt)
        elif isinstance(stmt, OpaqueDecl):
            self.declare(stmt.name, _GateSig(len(stmt.params), len(stmt.qargs)), stmt.line, stmt.col)
        elif isinstance(stmt, GateCall):
            self.check_call(stmt)
            for expr in stmt.params:
                _check_expr(expr, frozenset(), stmt.line, stmt.col)
            refs = [self.resolve(q, self.qregs, "quantum", stmt.line, stmt.col) for q in stmt.qargs]
            width = self.broadcast(refs, f"call to {stmt.name!r}", stmt.line, stmt.col)
            self.main.extend([stmt.name] * width)
        elif isinstance(stmt, Barrier):
            for q in stmt.qargs:
                self.resolve(q, self.qregs, "quantum", stmt.line, stmt.col)
        elif isinstance(stmt, Measure):
            qubits = self.resolve(stmt.qarg, self.qregs, "quantum", stmt.line, stmt.col)
            bits = self.resolve(stmt.carg, self.cregs, "classical", stmt.line, stmt.col)
            if len(qubits) != len(bits):
                raise QasmSemanticError("measure operands have different sizes", stmt.line, stmt.col)
            self.main.extend([MEASURE] * len(qubits))
        elif isinstance(stmt, Reset):
            qubits = self.resolve(stmt.qarg, self.qregs, "quantum", stmt.line, stmt.col)
            self.main.extend([RESET] * len(qubits))


def _effective_times(table: Mapping[str, list[str]], times: GateTimes) -> GateTimes:
    """Add entries for builtins and measure/reset reached from the root.

    ``U`` and ``CX`` borrow the durations of ``u3`` and ``cx``; measure and
    reset default to zero.
    """
    reached: set[str] = set()
    stack = [ROOT_NAME]
    while stack:
        name = stack.pop()
        if name in reached:
            continue
        reached.add(name)
        if name in times:
            continue
        stack.extend(table.get(name, ()))
    extra: dict[str, float] = {}
    for name in sorted(reached):
        if name in times or name in table:
            continue
        if name in BUILTINS:
            key = BUILTINS[name][0]
            if key not in times:
                raise NativeGateWithoutTime(name, f"builtin {name} is priced as {key!r}")
            extra[name] = times[key]
        elif name in (MEASURE, RESET):
            extra[name] = 0.0
        else:
            raise NativeGateWithoutTime(name, "opaque gates need an entry in the gate times")
    return times.extended(extra) if extra else times


def lower_qasm(ast: QasmAst, times: Mapping[str, float]) -> CircuitIR:
    """Turn a parsed program into a :class:`CircuitIR` rooted at ``main``.

    Gate definitions become composite routines unless their name is a key of
    ``times``. The resulting IR carries the effective gate times, which may
    include entries added for ``U``, ``CX``, ``measure`` and ``reset``.
    """
    if not isinstance(times, GateTimes):
        times = validate_gate_times(times)
    lowering = _Lowering()
    for stmt in ast.walk():
        lowering.statement(stmt)
    table = dict(lowering.table)
    table[ROOT_NAME] = lowering.main
    effective = _effective_times(table, times)
    return build_ir(TableRoutine(ROOT_NAME, table), effective, sum(lowering.qregs.values()))


def load_qasm(source: str, times: Mapping[str, float]) -> CircuitIR:
    return lower_qasm(parse_qasm(source), times)
