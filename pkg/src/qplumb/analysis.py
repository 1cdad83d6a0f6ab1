"""T-gate demand analysis over scheduled circuits.

Three views of the same question -- does the magic-state supply keep up
with the circuit's T gates?

* :func:`t_histogram` counts T gates per aligned time window,
* :func:`enforce_t_capacity` delays surplus T gates until every window
  holds at most a given number,
* :func:`simulate_availability` replays production/consumption of
  distilled states and delays T gates that would starve.

Windows are aligned to the fixed grid 1, 1+W, 1+2W, ...; delayed gates
move to the start of the next window, the smallest displacement that
guarantees the capacity fixpoint terminates.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

from .errors import BadParam
from .gatelang import Circuit, Gate, T_KINDS, metrics, validate_scheduled
from .schedule import delay_gate


@dataclass(frozen=True, slots=True)
class TDistribution:
    window: int
    bins: tuple[tuple[int, int], ...]  # (window start time, T count)

    def total(self) -> int:
        return sum(count for _, count in self.bins)


@dataclass(frozen=True, slots=True)
class FactoryConfig:
    """Distillation capacity: `concurrent` states every `duration` units.

    With `warmup_allowed` (the default) production started early enough
    that the first batch is ready at time 1; layouts pre-place boxes ahead
    of the computation.  Cold start delivers the first batch at
    1 + duration instead.
    """

    concurrent: int = 1
    duration: int = 5
    warmup_allowed: bool = True

    def __post_init__(self) -> None:
        if self.concurrent < 1:
            raise BadParam(f"concurrent must be >= 1, got {self.concurrent}")
        if self.duration < 1:
            raise BadParam(f"duration must be >= 1, got {self.duration}")

    @property
    def first_batch(self) -> int:
        return 1 if self.warmup_allowed else 1 + self.duration


@dataclass(frozen=True)
class AvailabilityTrace:
    """Per-time-step production/consumption and the running stock."""

    horizon: int
    produced: tuple[int, ...]
    consumed: tuple[int, ...]
    available: tuple[int, ...]

    def cumulative_consumed(self) -> int:
        return sum(self.consumed)


def _is_t(g: Gate) -> bool:
    return g.kind.name in T_KINDS


def t_histogram(c: Circuit, window: int) -> TDistribution:
    """T gates per aligned width-`window` bin over [1, depth]."""
    if window < 1:
        raise BadParam(f"window must be >= 1, got {window}")
    validate_scheduled(c, "t_histogram")
    depth = max((g.time for g in c.gates), default=0)
    if depth == 0:
        return TDistribution(window, ())
    counts = [0] * ((depth - 1) // window + 1)
    for g in c.gates:
        if _is_t(g):
            counts[(g.time - 1) // window] += 1
    bins = tuple((1 + i * window, n) for i, n in enumerate(counts))
    return TDistribution(window, bins)


def enforce_t_capacity(c: Circuit, window: int, capacity: int) -> Circuit:
    """Delay T gates until every aligned window holds at most `capacity`.

    Windows are scanned in time order; within a window the T gates beyond
    the first `capacity` (by time, ties by wire id) move to the start of
    the next window, dependents shifting minimally.  The scan repeats
    until a full pass changes nothing.
    """
    if window < 1 or capacity < 1:
        raise BadParam("window and capacity must be >= 1")
    validate_scheduled(c, "enforce_t_capacity")
    changed = True
    while changed:
        changed = False
        start = 1
        while True:
            depth = max((g.time for g in c.gates), default=0)
            if start > depth:
                break
            in_window = sorted(
                (g.time, g.operands[0], i)
                for i, g in enumerate(c.gates)
                if _is_t(g) and start <= g.time < start + window
            )
            if len(in_window) > capacity:
                t, _, idx = in_window[capacity]
                c = delay_gate(c, idx, start + window - t)
                changed = True
                continue  # re-examine this window; dependents may have moved
            start += window
    return c


def simulate_availability(
    c: Circuit, factory: FactoryConfig | None = None
) -> tuple[AvailabilityTrace, Circuit, list[tuple[int, int]]]:
    """Replay state production against T-gate consumption.

    Factories release `concurrent` states every `duration` units.  T gates
    consume one state each in (time, wire) order; a T gate with no state
    available moves to the next production step, dependents shifting
    minimally (same semantics as chaining :func:`~qplumb.schedule.delay_gate`).
    Returns the trace, the delay-adjusted circuit, and the applied delays
    as (gate index, total delay) pairs.
    """
    factory = factory or FactoryConfig()
    validate_scheduled(c, "availability")
    gates = c.gates
    n = len(gates)
    duration = factory.duration
    batch = factory.concurrent

    # wire-dependency DAG from the input schedule
    order = sorted(range(n), key=lambda i: (gates[i].time, i))
    prev_on_wire: dict[int, int] = {}
    succs: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for i in order:
        preds = set()
        for w in gates[i].operands:
            p = prev_on_wire.get(w)
            if p is not None:
                preds.add(p)
            prev_on_wire[w] = i
        indeg[i] = len(preds)
        for p in preds:
            succs[p].append(i)

    new_time = [0] * n
    frontier: dict[int, int] = {}
    plain: deque[int] = deque()
    t_heap: list[tuple[int, int, int]] = []  # (candidate, wire, index)
    parked: list[tuple[int, int]] = []  # (wire, index), stock == 0 while non-empty
    consumed: dict[int, int] = {}

    def candidate(i: int) -> int:
        g = gates[i]
        return max(g.time, 1 + max((frontier.get(w, 0) for w in g.operands), default=0))

    def finalize(i: int, t: int) -> None:
        new_time[i] = t
        for w in gates[i].operands:
            frontier[w] = t
        for s in succs[i]:
            indeg[s] -= 1
            if indeg[s] == 0:
                enqueue(s)

    def enqueue(i: int) -> None:
        if _is_t(gates[i]):
            heapq.heappush(t_heap, (candidate(i), gates[i].operands[0], i))
        else:
            plain.append(i)

    def drain_plain() -> None:
        while plain:
            i = plain.popleft()
            finalize(i, candidate(i))

    for i in order:
        if indeg[i] == 0:
            enqueue(i)
    drain_plain()

    stock = 0
    next_prod = factory.first_batch
    while t_heap or parked:
        if not parked:
            cand, wire, idx = t_heap[0]
            while next_prod <= cand:
                stock += batch
                next_prod += duration
            heapq.heappop(t_heap)
            if stock > 0:
                stock -= 1
                consumed[cand] = consumed.get(cand, 0) + 1
                finalize(idx, cand)
                drain_plain()
            else:
                heapq.heappush(parked, (wire, idx))
        else:
            # all parked gates (and any heap entry due by then) compete at
            # the next production step, lowest wire id first
            while t_heap and t_heap[0][0] <= next_prod:
                _, wire, idx = heapq.heappop(t_heap)
                heapq.heappush(parked, (wire, idx))
            tp = next_prod
            stock += batch
            next_prod += duration
            while stock > 0 and parked:
                _, idx = heapq.heappop(parked)
                stock -= 1
                consumed[tp] = consumed.get(tp, 0) + 1
                finalize(idx, tp)
                drain_plain()

    horizon = max(new_time, default=0)
    produced = [0] * horizon
    for t in range(factory.first_batch, horizon + 1, duration):
        produced[t - 1] = batch
    consumed_series = [0] * horizon
    for t, k in consumed.items():
        consumed_series[t - 1] = k
    available = []
    running = 0
    for p, k in zip(produced, consumed_series):
        running += p - k
        available.append(running)
    trace = AvailabilityTrace(
        horizon, tuple(produced), tuple(consumed_series), tuple(available)
    )

    delays = [
        (i, new_time[i] - gates[i].time)
        for i in sorted(range(n), key=lambda i: (new_time[i], i))
        if new_time[i] != gates[i].time and _is_t(gates[i])
    ]
    adjusted = c.replace_gates(
        g if new_time[i] == g.time else g.with_time(new_time[i])
        for i, g in enumerate(gates)
    )
    return trace, adjusted, delays


def analysis_report(
    c: Circuit, window: int | None = None, factory: FactoryConfig | None = None
) -> dict:
    """Bundle histogram, availability trace, and metrics into one document.

    The window defaults to the factory duration (one distillation per
    window is the break-even demand).
    """
    factory = factory or FactoryConfig()
    if window is None:
        window = factory.duration
    hist = t_histogram(c, window)
    trace, _, delays = simulate_availability(c, factory)
    return {
        "metrics": metrics(c).to_dict(),
        "histogram": {
            "window": hist.window,
            "bins": [[start, count] for start, count in hist.bins],
        },
        "availability": {
            "duration": factory.duration,
            "concurrent": factory.concurrent,
            "warmup": factory.warmup_allowed,
            "series": {
                "produced": list(trace.produced),
                "consumed": list(trace.consumed),
                "available": list(trace.available),
            },
        },
        "delays_applied": [[i, d] for i, d in delays],
    }
