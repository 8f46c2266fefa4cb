"""Syntax tree for the supported OpenQASM 2.0 subset, plus an unparser.

Source positions are carried on statements but excluded from equality, so
``parse(unparse(ast)) == ast`` holds regardless of layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class Num:
    text: str


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class ParamRef:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr


Expr = Union[Num, Pi, ParamRef, Neg, BinOp]


@dataclass(frozen=True)
class QubitRef:
    register: str
    index: int | None = None

    def __str__(self) -> str:
        return self.register if self.index is None else f"{self.register}[{self.index}]"


@dataclass(frozen=True)
class QregDecl:
    name: str
    size: int
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CregDecl:
    name: str
    size: int
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GateCall:
    name: str
    params: tuple[Expr, ...]
    qargs: tuple[QubitRef, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Barrier:
    qargs: tuple[QubitRef, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Measure:
    qarg: QubitRef
    carg: QubitRef
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Reset:
    qarg: QubitRef
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GateDef:
    name: str
    params: tuple[str, ...]
    qargs: tuple[str, ...]
    body: tuple[GateCall | Barrier, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class OpaqueDecl:
    name: str
    params: tuple[str, ...]
    qargs: tuple[str, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Include:
    """An include directive together with the declarations it pulled in."""

    name: str
    declarations: tuple[Statement, ...] = field(default=(), repr=False)
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Statement = Union[QregDecl, CregDecl, GateDef, OpaqueDecl, GateCall, Barrier, Measure, Reset, Include]


@dataclass(frozen=True)
class QasmAst:
    version: str
    declarations: tuple[Statement, ...]

    def walk(self):
        """Yield statements in source order with includes expanded in place."""
        stack = [iter(self.declarations)]
        while stack:
            for stmt in stack[-1]:
                yield stmt
                if isinstance(stmt, Include):
                    stack.append(iter(stmt.declarations))
                    break
            else:
                stack.pop()

    @property
    def gate_defs(self) -> dict[str, GateDef]:
        return {s.name: s for s in self.walk() if isinstance(s, GateDef)}


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def unparse_expr(expr: Expr) -> str:
    if isinstance(expr, Num):
        return expr.text
    if isinstance(expr, Pi):
        return "pi"
    if isinstance(expr, ParamRef):
        return expr.name
    if isinstance(expr, Neg):
        inner = unparse_expr(expr.operand)
        if isinstance(expr.operand, (BinOp, Neg)):
            inner = f"({inner})"
        return f"-{inner}"
    prec = _PRECEDENCE[expr.op]
    left = unparse_expr(expr.left)
    right = unparse_expr(expr.right)
    if isinstance(expr.left, BinOp) and _PRECEDENCE[expr.left.op] < prec:
        left = f"({left})"
    if isinstance(expr.right, BinOp) and _PRECEDENCE[expr.right.op] <= prec:
        right = f"({right})"
    return f"{left} {expr.op} {right}"


def _call_text(call: GateCall) -> str:
    params = ""
    if call.params:
        params = "(" + ", ".join(unparse_expr(p) for p in call.params) + ")"
    return f"{call.name}{params} " + ", ".join(str(q) for q in call.qargs) + ";"


def _signature(name: str, params: tuple[str, ...], qargs: tuple[str, ...]) -> str:
    head = name
    if params:
        head += "(" + ", ".join(params) + ")"
    return f"{head} " + ", ".join(qargs)


def unparse_statement(stmt: Statement) -> str:
    if isinstance(stmt, Include):
        return f'include "{stmt.name}";'
    if isinstance(stmt, QregDecl):
        return f"qreg {stmt.name}[{stmt.size}];"
    if isinstance(stmt, CregDecl):
        return f"creg {stmt.name}[{stmt.size}];"
    if isinstance(stmt, GateCall):
        return _call_text(stmt)
    if isinstance(stmt, Barrier):
        return "barrier " + ", ".join(str(q) for q in stmt.qargs) + ";"
    if isinstance(stmt, Measure):
        return f"measure {stmt.qarg} -> {stmt.carg};"
    if isinstance(stmt, Reset):
        return f"reset {stmt.qarg};"
    if isinstance(stmt, OpaqueDecl):
        return "opaque " + _signature(stmt.name, stmt.params, stmt.qargs) + ";"
    if isinstance(stmt, GateDef):
        lines = ["gate " + _signature(stmt.name, stmt.params, stmt.qargs), "{"]
        lines.extend("  " + unparse_statement(op) for op in stmt.body)
        lines.append("}")
        return "\n".join(lines)
    raise TypeError(f"not a statement: {stmt!r}")


def unparse(ast: QasmAst) -> str:
    lines = [f"OPENQASM {ast.version};"]
    lines.extend(unparse_statement(stmt) for stmt in ast.declarations)
    return "\n".join(lines) + "\n"
