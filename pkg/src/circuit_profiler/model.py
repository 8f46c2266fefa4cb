"""Circuit intermediate representation and the routine-adapter interface.

Frontends describe a program as a tree of :class:`RoutineAdapter` objects.
:func:`build_ir` interns that tree into a :class:`CircuitIR`: a table with
exactly one :class:`Routine` per routine name, where call bodies refer to
other routines by dense integer id.
"""

from __future__ import annotations

import abc
import enum
import json
import math
from collections import deque
from dataclasses import dataclass, field
from numbers import Real
from typing import Hashable, Iterable, Iterator, Mapping, NewType, Sequence

from .errors import (
    DuplicateRoutine,
    EmptyComposite,
    EmptyGateName,
    EmptyGateTimes,
    GateTimesError,
    InvalidDuration,
    NativeGateWithoutTime,
    NegativeDuration,
    UnknownRoutine,
)

RoutineId = NewType("RoutineId", int)


class GateTimes(Mapping[str, float]):
    """Immutable map from native gate name to its duration.

    Membership is the nativeness predicate: any routine whose name is a key
    is treated as a hardware operation and is never decomposed further.
    Durations are unit-agnostic.
    """

    __slots__ = ("_entries",)

    def __init__(self, raw: Mapping[str, object]) -> None:
        if not isinstance(raw, Mapping):
            raise GateTimesError("gate times must be a mapping of gate name to duration")
        entries: dict[str, float] = {}
        for name, value in raw.items():
            if not isinstance(name, str) or not name:
                raise EmptyGateName()
            if isinstance(value, bool) or not isinstance(value, Real):
                raise InvalidDuration(name, value)
            value = float(value)
            if math.isnan(value) or math.isinf(value):
                raise InvalidDuration(name, value)
            if value < 0:
                raise NegativeDuration(name, value)
            entries[name] = value
        if not entries:
            raise EmptyGateTimes()
        self._entries = entries

    def __getitem__(self, name: str) -> float:
        return self._entries[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GateTimes):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self._entries == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._entries.items()))

    def __repr__(self) -> str:
        return f"GateTimes({self._entries!r})"

    def scaled(self, factor: float) -> GateTimes:
        return GateTimes({name: value * factor for name, value in self._entries.items()})

    def extended(self, extra: Mapping[str, float]) -> GateTimes:
        """Return a copy with ``extra`` entries added; existing entries win."""
        merged = dict(extra)
        merged.update(self._entries)
        return GateTimes(merged)

    def to_dict(self) -> dict[str, float]:
        return dict(self._entries)


def validate_gate_times(raw: Mapping[str, object]) -> GateTimes:
    """Check and copy a raw ``name -> duration`` map."""
    return GateTimes(raw)


def parse_gate_times(text: str) -> GateTimes:
    """Parse a gate-times JSON document such as ``{"u1": 0, "cx": 300}``."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GateTimesError(f"gate times file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise GateTimesError("gate times file must contain a JSON object")
    return validate_gate_times(raw)


class RoutineKind(enum.Enum):
    NATIVE = "native"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class Routine:
    name: str
    kind: RoutineKind
    body: tuple[RoutineId, ...] = ()
    duration: float | None = None

    @property
    def is_native(self) -> bool:
        return self.kind is RoutineKind.NATIVE


@dataclass(frozen=True)
class CircuitIR:
    """Interned routine table with a designated root."""

    routines: tuple[Routine, ...]
    root: RoutineId
    gate_times: GateTimes
    qubit_count: int = 0
    _by_name: dict[str, RoutineId] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_name: dict[str, RoutineId] = {}
        n = len(self.routines)
        if not 0 <= self.root < n:
            raise ValueError(f"root id {self.root} out of range")
        if self.qubit_count < 0:
            raise ValueError("qubit_count must be non-negative")
        for rid, routine in enumerate(self.routines):
            if routine.name in by_name:
                raise DuplicateRoutine(routine.name)
            by_name[routine.name] = RoutineId(rid)
            native = routine.name in self.gate_times
            if routine.is_native != native:
                raise ValueError(f"routine {routine.name!r}: kind disagrees with gate times")
            if routine.is_native:
                if routine.body or routine.duration != self.gate_times[routine.name]:
                    raise ValueError(f"native routine {routine.name!r} is malformed")
            elif not routine.body:
                raise EmptyComposite(routine.name)
            for callee in routine.body:
                if not 0 <= callee < n:
                    raise ValueError(f"routine {routine.name!r} calls unknown id {callee}")
        object.__setattr__(self, "_by_name", by_name)

    def __getitem__(self, rid: int) -> Routine:
        return self.routines[rid]

    def __len__(self) -> int:
        return len(self.routines)

    def id_of(self, name: str) -> RoutineId:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownRoutine(name) from None

    def name_of(self, rid: int) -> str:
        return self.routines[rid].name

    @property
    def root_routine(self) -> Routine:
        return self.routines[self.root]


class RoutineAdapter(abc.ABC):
    """Interface a frontend implements to expose its routine hierarchy.

    Equality and hashing delegate to :meth:`identity_key`, so adapters can be
    used directly as cache keys.
    """

    @abc.abstractmethod
    def name(self) -> str: ...

    @abc.abstractmethod
    def is_base(self) -> bool:
        """True for routines that represent a hardware operation."""

    @abc.abstractmethod
    def children(self) -> Sequence[RoutineAdapter]:
        """Called subroutines, in call order. Empty when :meth:`is_base`."""

    def identity_key(self) -> Hashable:
        return self.name()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RoutineAdapter):
            return NotImplemented
        return self.identity_key() == other.identity_key()

    def __hash__(self) -> int:
        return hash(self.identity_key())


class TableRoutine(RoutineAdapter):
    """Adapter over a plain ``name -> [callee names]`` definition table.

    Names absent from the table are base routines.
    """

    __slots__ = ("_name", "_table")

    def __init__(self, name: str, table: Mapping[str, Sequence[str]]) -> None:
        self._name = name
        self._table = table

    def name(self) -> str:
        return self._name

    def is_base(self) -> bool:
        return self._name not in self._table

    def children(self) -> list[TableRoutine]:
        return [TableRoutine(callee, self._table) for callee in self._table.get(self._name, ())]

    def __repr__(self) -> str:
        return f"TableRoutine({self._name!r})"


def build_ir(root: RoutineAdapter, times: GateTimes, qubit_count: int = 0) -> CircuitIR:
    """Intern an adapter tree into a :class:`CircuitIR`.

    A routine whose name is in ``times`` is native even if the adapter could
    decompose it. Each identity key is expanded at most once, so shared and
    even recursive structures are handled in time linear in the number of
    distinct routines.
    """
    if not isinstance(times, GateTimes):
        times = validate_gate_times(times)
    ids: dict[Hashable, RoutineId] = {}
    names: set[str] = set()
    entries: list[tuple[str, RoutineKind, float | None]] = []
    bodies: list[list[RoutineId]] = []
    pending: deque[tuple[RoutineId, Iterable[RoutineAdapter]]] = deque()

    def intern(adapter: RoutineAdapter) -> RoutineId:
        key = adapter.identity_key()
        rid = ids.get(key)
        if rid is not None:
            return rid
        name = adapter.name()
        if name in names:
            raise DuplicateRoutine(name)
        rid = RoutineId(len(entries))
        ids[key] = rid
        names.add(name)
        bodies.append([])
        if name in times:
            entries.append((name, RoutineKind.NATIVE, times[name]))
        elif adapter.is_base():
            raise NativeGateWithoutTime(name)
        else:
            children = list(adapter.children())
            if not children:
                raise EmptyComposite(name)
            entries.append((name, RoutineKind.COMPOSITE, None))
            pending.append((rid, children))
        return rid

    root_id = intern(root)
    while pending:
        rid, children = pending.popleft()
        bodies[rid] = [intern(child) for child in children]

    routines = tuple(
        Routine(name, kind, tuple(body), duration)
        for (name, kind, duration), body in zip(entries, bodies)
    )
    return CircuitIR(routines, root_id, times, qubit_count)
