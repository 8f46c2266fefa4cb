"""Circuit frontends: OpenQASM 2.0 and the JSON interchange format."""

from .interchange import load_interchange, parse_interchange
from .qasm import load_qasm, lower_qasm, parse_qasm
from .qasm_ast import QasmAst, unparse

__all__ = [
    "QasmAst",
    "load_interchange",
    "load_qasm",
    "lower_qasm",
    "parse_interchange",
    "parse_qasm",
    "unparse",
]
