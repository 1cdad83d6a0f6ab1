"""Textual gate-list language and the in-memory circuit model.

Every pipeline component exchanges circuits as lists of strings, one gate
per line.  A gate is either *unscheduled* (placed relative to its
neighbours, with a signed time offset after ``|``) or *scheduled* (pinned
to an absolute time coordinate before ``@``)::

    cx 4 0|0        # unscheduled CNOT, no offset
    cx 4 0|3        # unscheduled, shift 3 slots into the future when scheduled
    1@cx 4 0        # scheduled at time coordinate 1 (the first slot)
    init 7 A|0      # wire 7 initialised into the |A> magic state
    # comment lines and blank lines are ignored

Parsing is gate-type agnostic: unknown kinds are accepted with their arity
inferred from the operand count, so components stay composable over any
alphabet.  A strict mode rejects kinds outside the known set for stages
that need a closed alphabet.

Grammar (UTF-8, one gate per line)::

    line      := comment | blank | directive | gateline
    gateline  := [ time "@" ] kind { WS operand } [ "|" offset ]
    time      := integer >= 1      offset := signed integer
    operand   := integer >= 0 | state label (init only, after the wire)
    comment   := "#" to end of line
    directive := ".wires" WS integer | ".name" WS token

Canonical serialization emits ``.wires`` first, then gates in order;
unscheduled gates always carry an explicit ``|offset`` and scheduled gates
never do.  File extension: ``.qlist``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import (
    DuplicateOperand,
    MalformedLine,
    NegativeTime,
    ParseError,
    UnknownKind,
    UnscheduledInput,
)

RESERVED_CHARS = ("@", "|", "#")

# Known alphabet: kind -> arity.  `init` additionally carries a state label.
KNOWN_ARITIES: dict[str, int] = {
    "cx": 2,
    "ccx": 3,
    "t": 1,
    "tdg": 1,
    "s": 1,
    "sdg": 1,
    "h": 1,
    "x": 1,
    "y": 1,
    "z": 1,
    "init": 1,
    "mz": 1,
    "mx": 1,
}

ICM_KINDS = frozenset({"init", "cx", "mz", "mx"})
T_KINDS = frozenset({"t", "tdg"})

# The |A> label marks a magic-state initialisation; each one consumes a
# distilled state and therefore a distillation box in the layout.
MAGIC_STATE_LABEL = "A"


@dataclass(frozen=True, slots=True)
class GateKind:
    """A named operation: lowercase token, arity, optional state label."""

    name: str
    arity: int
    tag_payload: str | None = None


# Kind instances are interned; large circuits repeat a handful of kinds.
_KIND_CACHE: dict[tuple[str, int, str | None], GateKind] = {}


def make_kind(name: str, arity: int, tag_payload: str | None = None) -> GateKind:
    key = (name, arity, tag_payload)
    kind = _KIND_CACHE.get(key)
    if kind is None:
        kind = GateKind(name, arity, tag_payload)
        _KIND_CACHE[key] = kind
    return kind


@dataclass(frozen=True, slots=True)
class Unscheduled:
    """Relative placement: shift by `offset` slots once a scheduler runs."""

    offset: int = 0


@dataclass(frozen=True, slots=True)
class Scheduled:
    """Absolute placement at time coordinate `time` (first slot is 1)."""

    time: int


NO_OFFSET = Unscheduled(0)


@dataclass(frozen=True, slots=True)
class Gate:
    kind: GateKind
    operands: tuple[int, ...]
    schedule: Unscheduled | Scheduled = NO_OFFSET

    @property
    def name(self) -> str:
        return self.kind.name

    @property
    def is_scheduled(self) -> bool:
        return type(self.schedule) is Scheduled

    @property
    def time(self) -> int:
        """Time coordinate; only valid for scheduled gates."""
        return self.schedule.time  # type: ignore[union-attr]

    @property
    def offset(self) -> int:
        """Relative offset; only valid for unscheduled gates."""
        return self.schedule.offset  # type: ignore[union-attr]

    def with_time(self, time: int) -> "Gate":
        return Gate(self.kind, self.operands, Scheduled(time))

    def with_operands(self, operands: tuple[int, ...]) -> "Gate":
        return Gate(self.kind, operands, self.schedule)


def gate(name: str, *operands: int, offset: int = 0, payload: str | None = None) -> Gate:
    """Build an unscheduled gate; arity is taken from the operand count."""
    g = Gate(make_kind(name, len(operands), payload), tuple(operands), Unscheduled(offset))
    _check_gate(g)
    return g


def at(time: int, name: str, *operands: int, payload: str | None = None) -> Gate:
    """Build a scheduled gate at an absolute time coordinate."""
    if time < 1:
        raise NegativeTime(f"time coordinate {time} < 1")
    g = Gate(make_kind(name, len(operands), payload), tuple(operands), Scheduled(time))
    _check_gate(g)
    return g


def _check_gate(g: Gate) -> None:
    if len(set(g.operands)) != len(g.operands):
        raise DuplicateOperand(f"repeated wire id in {g.kind.name} {g.operands}")
    if any(o < 0 for o in g.operands):
        raise MalformedLine(f"negative wire id in {g.kind.name} {g.operands}")


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list plus wire registry; the pipeline currency.

    `metadata` records provenance and applied transforms; it does not take
    part in equality and is not serialized (except the circuit name).
    """

    gates: tuple[Gate, ...]
    wire_count: int
    name: str | None = None
    wire_names: tuple[str, ...] | None = field(default=None, compare=False)
    metadata: dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        for g in self.gates:
            for o in g.operands:
                if o >= self.wire_count:
                    raise BadOperandRange(
                        f"wire {o} out of range for wire_count {self.wire_count}"
                    )

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    @property
    def is_scheduled(self) -> bool:
        """True when every gate carries an absolute time coordinate."""
        return all(g.is_scheduled for g in self.gates)

    @property
    def is_unscheduled(self) -> bool:
        return all(not g.is_scheduled for g in self.gates)

    def replace_gates(self, gates: Iterable[Gate], wire_count: int | None = None) -> "Circuit":
        return Circuit(
            tuple(gates),
            self.wire_count if wire_count is None else wire_count,
            self.name,
            self.wire_names,
            dict(self.metadata),
        )

    def with_metadata(self, **entries: str) -> "Circuit":
        meta = dict(self.metadata)
        meta.update(entries)
        return Circuit(self.gates, self.wire_count, self.name, self.wire_names, meta)


class BadOperandRange(ParseError):
    """Operand id at or above the declared wire count."""


def circuit(gates: Iterable[Gate], wire_count: int | None = None, name: str | None = None) -> Circuit:
    """Build a circuit, inferring the wire count from operands when omitted."""
    gs = tuple(gates)
    inferred = 1 + max((o for g in gs for o in g.operands), default=-1)
    if wire_count is None:
        wire_count = inferred
    return Circuit(gs, max(wire_count, inferred), name)


# --- parsing -----------------------------------------------------------------

def _strip(line: str) -> str:
    hash_pos = line.find("#")
    if hash_pos >= 0:
        line = line[:hash_pos]
    return line.strip()


def _parse_int(token: str, what: str) -> int:
    try:
        return int(token, 10)
    except ValueError:
        raise MalformedLine(f"expected {what}, got {token!r}") from None


_KIND_OK = frozenset("abcdefghijklmnopqrstuvwxyz0123456789_-")


def _valid_kind(token: str) -> bool:
    return bool(token) and token[0].isalpha() and token[0].islower() and set(token) <= _KIND_OK


def _is_int(token: str) -> bool:
    body = token[1:] if token[:1] in "+-" else token
    return body.isdigit()


def parse_gate(line: str, strict_kinds: bool = False) -> Gate:
    """Parse one gate line.

    Raises a typed :class:`~qplumb.errors.ParseError` subclass on any
    malformed input; never crashes on junk.
    """
    text = _strip(line)
    if not text:
        raise MalformedLine("empty gate line")

    time: int | None = None
    if "@" in text:
        time_part, _, text = text.partition("@")
        time_part = time_part.strip()
        if not _is_int(time_part):
            raise MalformedLine(f"bad time prefix {time_part!r}")
        time = int(time_part)
        if time < 1:
            raise NegativeTime(f"time coordinate {time} < 1")
        if not text.strip():
            raise MalformedLine("time prefix without a gate")

    offset = 0
    if "|" in text:
        if time is not None:
            raise MalformedLine("a scheduled gate cannot also carry an offset")
        text, _, offset_part = text.rpartition("|")
        offset_part = offset_part.strip()
        if "|" in text:
            raise MalformedLine("more than one offset separator")
        if not _is_int(offset_part):
            raise MalformedLine(f"bad offset {offset_part!r}")
        offset = int(offset_part)

    tokens = text.split()
    if not tokens:
        raise MalformedLine("missing gate kind")
    kind_name = tokens[0]
    if not _valid_kind(kind_name):
        raise MalformedLine(f"bad gate kind {kind_name!r}")

    payload: str | None = None
    operand_tokens = tokens[1:]
    if kind_name == "init":
        # init <wire> [<STATE>]: the state label sits after the wire id.
        if len(operand_tokens) == 2 and not _is_int(operand_tokens[1]):
            payload = operand_tokens[1]
            operand_tokens = operand_tokens[:1]
        elif len(operand_tokens) > 1:
            raise MalformedLine("init takes one wire and an optional state label")

    operands = tuple(_parse_int(tok, "wire id") for tok in operand_tokens)
    if any(o < 0 for o in operands):
        raise MalformedLine("wire ids must be non-negative")
    if len(set(operands)) != len(operands):
        raise DuplicateOperand(f"repeated wire id in {text!r}")

    known_arity = KNOWN_ARITIES.get(kind_name)
    if known_arity is not None:
        if len(operands) != known_arity:
            raise MalformedLine(
                f"{kind_name} takes {known_arity} wire(s), got {len(operands)}"
            )
    elif strict_kinds:
        raise UnknownKind(f"unknown gate kind {kind_name!r}")
    elif not operands:
        raise MalformedLine(f"gate {kind_name!r} has no operands")

    kind = make_kind(kind_name, len(operands), payload)
    schedule = Scheduled(time) if time is not None else Unscheduled(offset)
    return Gate(kind, operands, schedule)


def serialize_gate(g: Gate) -> str:
    """Canonical line form; `parse_gate(serialize_gate(g)) == g`."""
    tokens = [g.kind.name, *map(str, g.operands)]
    if g.kind.tag_payload is not None:
        tokens.append(g.kind.tag_payload)
    body = " ".join(tokens)
    if g.is_scheduled:
        return f"{g.time}@{body}"
    return f"{body}|{g.offset}"


def parse_circuit(lines: Iterable[str], strict_kinds: bool = False) -> Circuit:
    """Parse gate-list text into a circuit.

    Wire count is the larger of the ``.wires`` header and 1 + the highest
    operand id.  Parse errors are re-raised with their line number.
    """
    gates: list[Gate] = []
    declared_wires = 0
    name: str | None = None
    max_operand = -1
    for line_no, raw in enumerate(lines, start=1):
        text = _strip(raw)
        if not text:
            continue
        if text.startswith("."):
            tokens = text.split()
            if tokens[0] == ".wires" and len(tokens) == 2:
                declared_wires = max(declared_wires, _parse_int(tokens[1], "wire count"))
            elif tokens[0] == ".name" and len(tokens) == 2:
                name = tokens[1]
            else:
                raise MalformedLine(f"bad directive {text!r}", line_no)
            continue
        try:
            g = parse_gate(text, strict_kinds=strict_kinds)
        except ParseError as err:
            raise type(err)(str(err), line_no) from None
        gates.append(g)
        if g.operands:
            max_operand = max(max_operand, max(g.operands))
    return Circuit(tuple(gates), max(declared_wires, max_operand + 1), name)


def serialize_circuit(c: Circuit) -> list[str]:
    """Canonical list-of-strings form: ``.wires`` first, then gates in order."""
    lines = [f".wires {c.wire_count}"]
    if c.name is not None:
        lines.append(f".name {c.name}")
    lines.extend(serialize_gate(g) for g in c.gates)
    return lines


def circuit_text(c: Circuit) -> str:
    return "\n".join(serialize_circuit(c)) + "\n"


def parse_circuit_text(text: str, strict_kinds: bool = False) -> Circuit:
    return parse_circuit(text.splitlines(), strict_kinds=strict_kinds)


# --- metrics -----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class MetricsReport:
    gate_count: int
    t_count: int
    cnot_count: int
    wire_count: int
    depth: int | None

    def to_dict(self) -> dict[str, int | None]:
        return {
            "gate_count": self.gate_count,
            "t_count": self.t_count,
            "cnot_count": self.cnot_count,
            "wire_count": self.wire_count,
            "depth": self.depth,
        }


def metrics(c: Circuit) -> MetricsReport:
    """Count gates, T gates (t and tdg), CNOTs, and depth when scheduled."""
    t_count = 0
    cnot_count = 0
    depth = 0
    fully_scheduled = bool(c.gates)
    for g in c.gates:
        name = g.kind.name
        if name in T_KINDS:
            t_count += 1
        elif name == "cx":
            cnot_count += 1
        if g.is_scheduled:
            if g.time > depth:
                depth = g.time
        else:
            fully_scheduled = False
    return MetricsReport(
        gate_count=len(c.gates),
        t_count=t_count,
        cnot_count=cnot_count,
        wire_count=c.wire_count,
        depth=depth if fully_scheduled else None,
    )


def validate_scheduled(c: Circuit, op: str) -> None:
    """Require a fully scheduled circuit with per-wire distinct times."""
    seen: dict[int, set[int]] = {}
    for g in c.gates:
        if not g.is_scheduled:
            raise UnscheduledInput(f"{op} needs a fully scheduled circuit")
        for w in g.operands:
            times = seen.setdefault(w, set())
            if g.time in times:
                raise UnscheduledInput(
                    f"{op}: wire {w} carries two gates at time {g.time}"
                )
            times.add(g.time)
