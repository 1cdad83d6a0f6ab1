"""Time assignment, wire reordering / recycling, and targeted delays.

Time coordinates start at 1 and every gate takes one time unit regardless
of kind; the layout module applies its own pieces-per-step conversion.
Scheduling consumes the unscheduled offsets and produces pure scheduled
form, so downstream analysis never sees offset bookkeeping.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadIndex,
    BadParam,
    BadWire,
    NonLinearLifetime,
    OffsetConflict,
    ScheduledInput,
)
from .gatelang import NO_OFFSET, Circuit, Gate, validate_scheduled


@dataclass(frozen=True, slots=True)
class WireLifetime:
    wire: int
    birth: int
    death: int


# Bijection over 0..wire_count-1, old wire id -> new wire id.
Permutation = dict[int, int]


def schedule_asap(c: Circuit) -> Circuit:
    """Assign each gate 1 + the latest time on its wires, plus its offset.

    Program order is preserved.  A negative offset that would land a gate
    at or before the frontier of one of its wires raises OffsetConflict.
    """
    frontier: dict[int, int] = {}
    out: list[Gate] = []
    for i, g in enumerate(c.gates):
        if g.is_scheduled:
            raise ScheduledInput(
                f"gate {i} already carries a time coordinate; asap takes unscheduled input"
            )
        base = 1 + max((frontier.get(w, 0) for w in g.operands), default=0)
        final = base + g.offset
        for w in g.operands:
            if final <= frontier.get(w, 0):
                raise OffsetConflict(
                    f"gate {i} offset {g.offset} collides on wire {w} at time {final}"
                )
        for w in g.operands:
            frontier[w] = final
        out.append(g.with_time(final))
    return c.replace_gates(out)


def strip_schedule(c: Circuit) -> Circuit:
    """Drop time coordinates, yielding offset-0 unscheduled gates."""
    return c.replace_gates(Gate(g.kind, g.operands, NO_OFFSET) for g in c.gates)


def reorder_first_use(c: Circuit) -> tuple[Circuit, dict[int, int]]:
    """Renumber wires by first usage; unused wires keep their order at the end.

    Returns the rewritten circuit and the old -> new permutation.
    """
    order: list[int] = []
    seen: set[int] = set()
    for g in c.gates:
        for w in g.operands:
            if w not in seen:
                seen.add(w)
                order.append(w)
    for w in range(c.wire_count):
        if w not in seen:
            order.append(w)
    perm = {old: new for new, old in enumerate(order)}
    out = [g.with_operands(tuple(perm[w] for w in g.operands)) for g in c.gates]
    return c.replace_gates(out), perm


def swap_wires(c: Circuit, i: int, j: int) -> Circuit:
    """Exchange wires i and j in every gate; nothing else changes."""
    if not (0 <= i < c.wire_count) or not (0 <= j < c.wire_count):
        raise BadWire(f"swap({i}, {j}) outside wire_count {c.wire_count}")
    if i == j:
        return c
    table = {i: j, j: i}
    out = [
        g.with_operands(tuple(table.get(w, w) for w in g.operands))
        if (i in g.operands or j in g.operands)
        else g
        for g in c.gates
    ]
    return c.replace_gates(out)


def wire_lifetimes(c: Circuit) -> list[WireLifetime]:
    """Per-wire [birth, death] intervals of a fully scheduled circuit.

    Birth is the wire's ``init`` time (or time 1), death its terminal
    measurement time (or the circuit depth).  Raises NonLinearLifetime if
    a wire is touched before its init, after its measurement, or carries
    more than one of either.
    """
    validate_scheduled(c, "lifetimes")
    depth = max((g.time for g in c.gates), default=0)
    first_use: dict[int, int] = {}
    last_use: dict[int, int] = {}
    init_at: dict[int, int] = {}
    measured_at: dict[int, int] = {}
    for g in c.gates:
        for w in g.operands:
            t = g.time
            if w not in first_use or t < first_use[w]:
                first_use[w] = t
            if w not in last_use or t > last_use[w]:
                last_use[w] = t
            if g.kind.name == "init":
                if w in init_at:
                    raise NonLinearLifetime(f"wire {w} initialised twice")
                init_at[w] = t
            elif g.kind.name in ("mz", "mx"):
                if w in measured_at:
                    raise NonLinearLifetime(f"wire {w} measured twice")
                measured_at[w] = t
    lifetimes = []
    for w in range(c.wire_count):
        if w in init_at and init_at[w] != first_use[w]:
            raise NonLinearLifetime(f"wire {w} used before its init")
        if w in measured_at and measured_at[w] != last_use[w]:
            raise NonLinearLifetime(f"wire {w} used after its measurement")
        birth = init_at.get(w, 1)
        death = measured_at.get(w, depth)
        lifetimes.append(WireLifetime(w, birth, max(birth, death)))
    return lifetimes


def recycle_wires(c: Circuit) -> tuple[Circuit, dict[int, int]]:
    """Pack wire lifetimes onto physical tracks, first fit by birth time.

    Two lifetimes share a track only when strictly disjoint
    (death(a) < birth(b)), since a measurement and a later init may not
    collide in the same time slot.  First fit over birth-sorted intervals
    is optimal for interval graphs, so the track count equals the maximal
    overlap.  Returns the circuit rewritten onto tracks and the
    wire -> track map.
    """
    lifetimes = wire_lifetimes(c)
    track_end: list[int] = []  # last death per track
    assignment: dict[int, int] = {}
    for lt in sorted(lifetimes, key=lambda lt: (lt.birth, lt.wire)):
        for track, end in enumerate(track_end):
            if end < lt.birth:
                track_end[track] = lt.death
                assignment[lt.wire] = track
                break
        else:
            assignment[lt.wire] = len(track_end)
            track_end.append(lt.death)
    out = [g.with_operands(tuple(assignment[w] for w in g.operands)) for g in c.gates]
    rewritten = c.replace_gates(out, wire_count=len(track_end))
    return rewritten, assignment


def delay_gate(c: Circuit, index: int, delta: int) -> Circuit:
    """Push one gate `delta` slots later, minimally shifting its dependents.

    Gates that transitively depend on the target through shared wires move
    just enough to keep per-wire times distinct and order preserving;
    everything else keeps its time.
    """
    if not (0 <= index < len(c.gates)):
        raise BadIndex(f"gate index {index} outside circuit of {len(c.gates)}")
    if delta < 1:
        raise BadParam(f"delay must be >= 1, got {delta}")
    validate_scheduled(c, "delay")
    new_times = _delayed_times(c.gates, {index: c.gates[index].time + delta})
    return c.replace_gates(
        g if new_times[i] == g.time else g.with_time(new_times[i])
        for i, g in enumerate(c.gates)
    )


def _delayed_times(gates: tuple[Gate, ...], pinned: dict[int, int]) -> list[int]:
    """Minimal order-preserving times >= the originals with some gates pinned.

    Processes gates in original time order; each new time is the max of the
    gate's own base (original or pinned) and one past its wire
    predecessors' new times.
    """
    order = sorted(range(len(gates)), key=lambda i: (gates[i].time, i))
    new_times = [0] * len(gates)
    frontier: dict[int, int] = {}
    for i in order:
        g = gates[i]
        base = pinned.get(i, g.time)
        t = max(base, 1 + max((frontier.get(w, 0) for w in g.operands), default=0))
        new_times[i] = t
        for w in g.operands:
            frontier[w] = t
    return new_times
