"""Exception hierarchy.

The CLI maps the three top-level families onto exit codes:
``ConfigError`` -> 1, ``InputError`` -> 2, ``ProfilingError`` -> 3.
"""

from __future__ import annotations

from typing import Sequence


class ProfilerError(Exception):
    """Base class for every error raised by this package."""


# -- configuration ----------------------------------------------------------


class ConfigError(ProfilerError):
    pass


class GateTimesError(ConfigError):
    pass


class EmptyGateTimes(GateTimesError):
    def __init__(self) -> None:
        super().__init__("gate times must contain at least one entry")


class EmptyGateName(GateTimesError):
    def __init__(self) -> None:
        super().__init__("gate names must be non-empty strings")


class NegativeDuration(GateTimesError):
    def __init__(self, name: str, value: float) -> None:
        self.name = name
        self.value = value
        super().__init__(f"duration of gate {name!r} is negative ({value!r})")


class InvalidDuration(GateTimesError):
    def __init__(self, name: str, value: object) -> None:
        self.name = name
        self.value = value
        super().__init__(f"duration of gate {name!r} is not a finite number ({value!r})")


class UnknownRoutine(ConfigError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"no routine named {name!r} in the circuit")


# -- input ------------------------------------------------------------------


class InputError(ProfilerError):
    """Raised when a circuit description cannot be turned into an IR."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None) -> None:
        self.message = message
        self.line = line
        self.col = col
        super().__init__(self._format())

    def _format(self) -> str:
        if self.line is None:
            return self.message
        if self.col is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, col {self.col}: {self.message}"


class QasmSyntaxError(InputError):
    pass


class MissingVersionHeader(QasmSyntaxError):
    def __init__(self, line: int | None = 1, col: int | None = 1) -> None:
        super().__init__("missing 'OPENQASM 2.0;' header", line, col)


class UnknownInclude(InputError):
    def __init__(self, name: str, line: int | None = None, col: int | None = None) -> None:
        self.name = name
        super().__init__(f"unknown include file {name!r}", line, col)


class UnknownGate(InputError):
    def __init__(self, name: str, line: int | None = None, col: int | None = None) -> None:
        self.name = name
        super().__init__(f"unknown gate {name!r}", line, col)


class ArityMismatch(InputError):
    def __init__(
        self,
        name: str,
        expected: int,
        got: int,
        line: int | None = None,
        col: int | None = None,
        *,
        what: str = "qubit",
    ) -> None:
        self.name = name
        self.expected = expected
        self.got = got
        self.what = what
        super().__init__(
            f"gate {name!r} expects {expected} {what} argument(s), got {got}", line, col
        )


class QasmSemanticError(InputError):
    """Well-formed syntax that does not make sense (bad register, bad parameter)."""


class SchemaError(InputError):
    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}")


class DuplicateRoutine(InputError):
    def __init__(self, name: str, line: int | None = None, col: int | None = None) -> None:
        self.name = name
        super().__init__(f"routine {name!r} is defined more than once", line, col)


class NativeGateWithoutTime(InputError):
    def __init__(self, name: str, hint: str | None = None) -> None:
        self.name = name
        msg = f"native gate {name!r} has no configured duration"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class EmptyComposite(InputError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"non-native routine {name!r} calls no subroutine")


# -- profiling --------------------------------------------------------------


class ProfilingError(ProfilerError):
    pass


class RecursionUnsupported(ProfilingError):
    def __init__(self, cycle: Sequence[str]) -> None:
        self.cycle = list(cycle)
        path = " -> ".join([*self.cycle, self.cycle[0]]) if self.cycle else "?"
        super().__init__(f"recursive routine calls are not supported: {path}")


class ZeroTotalTime(ProfilingError):
    def __init__(self) -> None:
        super().__init__("total execution time is zero; percentages are undefined")
