"""Distillation-box scheduling, braided-defect geometry, resource estimates.

Everything is counted in plumbing pieces, the unit 3D cell of braided
surface-code layouts.  The geometry is a single fixed template:

* qubit tracks run along the time axis at ``x = track * pitch``, each a
  pair of defect lines occupying the cells ``y = 0`` and ``y = 1``;
* a CNOT braid is an axis-aligned loop between its two tracks, one piece
  thick in time, filling both rail rows across the spanned x range;
* distillation boxes sit in a row behind the qubits (``y = qubit_depth``),
  one box per magic-state consumption, re-using x slots once a box ends.

Braids are volume models, not routed paths; the bounding box and the
exact occupied-piece count are the load-bearing outputs.
"""
from __future__ import annotations

import json
from bisect import insort
from collections import deque
from dataclasses import dataclass
from heapq import heappop, heappush

from .errors import BadParam, InconsistentSchedule, NotICM
from .gatelang import (
    ICM_KINDS,
    MAGIC_STATE_LABEL,
    Circuit,
    validate_scheduled,
)
from .schedule import wire_lifetimes


@dataclass(frozen=True, slots=True)
class BoxSpec:
    """Distillation box dimensions in plumbing pieces; dz is temporal."""

    dx: int = 4
    dy: int = 4
    dz: int = 5

    def __post_init__(self) -> None:
        if self.dx < 1 or self.dy < 1 or self.dz < 1:
            raise BadParam(f"box dimensions must be >= 1, got {self}")


@dataclass(frozen=True, slots=True)
class GeometryConfig:
    pitch: int = 2  # x pieces per qubit track (double defect plus clearance)
    qubit_depth: int = 2  # y pieces reserved for the qubit row
    pieces_per_step: int = 1  # temporal pieces per schedule step

    def __post_init__(self) -> None:
        if self.pitch < 1 or self.qubit_depth < 2 or self.pieces_per_step < 1:
            raise BadParam(f"bad geometry config {self}")


@dataclass(frozen=True, slots=True)
class PlacedBox:
    index: int
    start: int  # time units; box occupies [start, start + dz)
    x: int  # x offset in pieces


@dataclass(frozen=True, slots=True)
class BoxSchedule:
    spec: BoxSpec
    concurrent: int
    boxes: tuple[PlacedBox, ...]

    def __len__(self) -> int:
        return len(self.boxes)


@dataclass(frozen=True, slots=True)
class Track:
    id: int
    x: int
    t0: int  # piece-time interval [t0, t1)
    t1: int


@dataclass(frozen=True, slots=True)
class Braid:
    time: int  # schedule step of the CNOT
    from_track: int
    to_track: int

    def cells(self, cfg: GeometryConfig) -> list[tuple[int, int, int]]:
        lo = min(self.from_track, self.to_track) * cfg.pitch
        hi = max(self.from_track, self.to_track) * cfg.pitch
        tp = (self.time - 1) * cfg.pieces_per_step
        return [(x, y, tp) for x in range(lo, hi + 1) for y in (0, 1)]


@dataclass(frozen=True)
class PlumbingLayout:
    tracks: tuple[Track, ...]
    braids: tuple[Braid, ...]
    boxes: tuple[PlacedBox, ...]
    spec: BoxSpec
    config: GeometryConfig
    bounding_box: tuple[int, int, int]  # (X, Y, T) in pieces


@dataclass(frozen=True, slots=True)
class ResourceEstimate:
    bounding_volume: int
    occupied_volume: int
    box_count: int
    track_count: int
    duration: int
    footprint: int

    def to_dict(self) -> dict[str, int]:
        return {
            "bounding_volume": self.bounding_volume,
            "occupied_volume": self.occupied_volume,
            "box_count": self.box_count,
            "track_count": self.track_count,
            "duration": self.duration,
            "footprint": self.footprint,
        }


def _check_icm(c: Circuit, op: str) -> None:
    for g in c.gates:
        if g.kind.name not in ICM_KINDS:
            raise NotICM(f"{op} needs an ICM circuit, found {g.kind.name!r}")


def _consumptions(c: Circuit) -> list[tuple[int, int, int]]:
    """Magic-state consumptions as (time, wire, gate index), sorted."""
    out = [
        (g.time, g.operands[0], i)
        for i, g in enumerate(c.gates)
        if g.kind.name == "init" and g.kind.tag_payload == MAGIC_STATE_LABEL
    ]
    out.sort()
    return out


def schedule_boxes(
    c: Circuit, spec: BoxSpec | None = None, concurrent: int = 1
) -> tuple[BoxSchedule, Circuit]:
    """Place one distillation box per magic-state consumption.

    Boxes start just in time (consumption - dz) or as soon as a factory
    slot frees up under the concurrency cap, whichever is later; a
    consumption whose box cannot finish in time is delayed, dependents
    shifting minimally.  Returns the schedule and the matching
    (possibly delayed) circuit.
    """
    spec = spec or BoxSpec()
    if concurrent < 1:
        raise BadParam(f"concurrent must be >= 1, got {concurrent}")
    _check_icm(c, "schedule_boxes")
    validate_scheduled(c, "schedule_boxes")
    gates = c.gates
    n = len(gates)
    dz = spec.dz

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

    def is_consumption(i: int) -> bool:
        g = gates[i]
        return g.kind.name == "init" and g.kind.tag_payload == MAGIC_STATE_LABEL

    new_time = [0] * n
    frontier: dict[int, int] = {}
    plain: deque[int] = deque()
    cons_heap: list[tuple[int, int, int]] = []

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
        if is_consumption(i):
            heappush(cons_heap, (candidate(i), gates[i].operands[0], i))
        else:
            plain.append(i)

    def drain_plain() -> None:
        while plain:
            finalize_i = plain.popleft()
            finalize(finalize_i, candidate(finalize_i))

    for i in order:
        if indeg[i] == 0:
            enqueue(i)
    drain_plain()

    machines = [0] * concurrent  # heap of box end times per factory slot
    free_slots: list[int] = list(range(concurrent))
    active: list[tuple[int, int]] = []  # (end, slot)
    placed: list[PlacedBox] = []

    while cons_heap:
        cand, _, idx = heappop(cons_heap)
        avail = heappop(machines)
        start = max(0, cand - dz, avail)
        end = start + dz
        heappush(machines, end)
        while active and active[0][0] <= start:
            _, slot = heappop(active)
            insort(free_slots, slot)
        if free_slots:
            slot = free_slots.pop(0)
        else:
            slot = concurrent + len(placed)  # defensive; cap bounds active boxes
        heappush(active, (end, slot))
        placed.append(PlacedBox(len(placed), start, slot * spec.dx))
        finalize(idx, max(cand, end))
        drain_plain()

    adjusted = c.replace_gates(
        g if new_time[i] == g.time else g.with_time(new_time[i])
        for i, g in enumerate(gates)
    )
    return BoxSchedule(spec, concurrent, tuple(placed)), adjusted


def build_layout(
    c: Circuit,
    spec: BoxSpec | None = None,
    box_schedule: BoxSchedule | None = None,
    config: GeometryConfig | None = None,
) -> PlumbingLayout:
    """Assemble tracks, braids, and boxes into a plumbing-piece layout.

    `box_schedule` must cover every magic-state consumption of `c` (extra
    boxes are allowed, e.g. pre-provisioned supply).  When omitted it is
    computed with a concurrency limit of 1.
    """
    spec = spec or BoxSpec()
    config = config or GeometryConfig()
    _check_icm(c, "build_layout")
    validate_scheduled(c, "build_layout")
    if box_schedule is None:
        box_schedule, c = schedule_boxes(c, spec, 1)
    if box_schedule.spec != spec:
        raise InconsistentSchedule(
            f"box schedule built for {box_schedule.spec}, layout asked for {spec}"
        )

    consumptions = _consumptions(c)
    boxes = sorted(box_schedule.boxes, key=lambda b: (b.start, b.index))
    if len(boxes) < len(consumptions):
        raise InconsistentSchedule(
            f"{len(consumptions)} magic-state consumptions but {len(boxes)} boxes"
        )
    for (time, wire, _), box in zip(consumptions, boxes):
        if time < box.start + spec.dz:
            raise InconsistentSchedule(
                f"consumption on wire {wire} at {time} precedes box supply at "
                f"{box.start + spec.dz}"
            )

    pps = config.pieces_per_step
    depth = max((g.time for g in c.gates), default=0)
    horizon = depth * pps

    tracks: list[Track] = []
    if depth > 0:
        for lt in wire_lifetimes(c):
            t0 = min((lt.birth - 1) * pps, horizon)
            t1 = min(lt.death * pps, horizon)
            tracks.append(Track(lt.wire, lt.wire * config.pitch, t0, t1))

    braids = tuple(
        Braid(g.time, g.operands[0], g.operands[1])
        for g in c.gates
        if g.kind.name == "cx"
    )

    slots_used = 0
    if box_schedule.boxes:
        slots_used = 1 + max(b.x for b in box_schedule.boxes) // spec.dx

    track_extent = len(tracks) * config.pitch
    if not tracks and not box_schedule.boxes and not braids:
        bounding = (0, 0, 0)
    else:
        x_extent = max(track_extent, slots_used * spec.dx)
        y_extent = config.qubit_depth + (spec.dy if box_schedule.boxes else 0)
        t_extent = max(
            horizon,
            max((b.start + spec.dz for b in box_schedule.boxes), default=0),
        )
        bounding = (x_extent, y_extent, t_extent)

    return PlumbingLayout(
        tuple(tracks), braids, tuple(boxes), spec, config, bounding
    )


class _Fenwick:
    def __init__(self, size: int):
        self.tree = [0] * (size + 1)

    def add(self, i: int, delta: int) -> None:
        i += 1
        while i < len(self.tree):
            self.tree[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        # sum of [0, i]
        i += 1
        total = 0
        while i > 0:
            total += self.tree[i]
            i -= i & -i
        return total

    def range_sum(self, lo: int, hi: int) -> int:
        if hi < lo:
            return 0
        return self.prefix(hi) - (self.prefix(lo - 1) if lo > 0 else 0)


def _braid_volume(l: PlumbingLayout) -> int:
    """Exact braid-cell count not already covered by rails.

    Per braided time slice: 2 * (union of spanned x intervals) minus the
    rail cells alive inside that union (they are counted with the
    tracks).  Runs an offline sweep so large layouts never enumerate
    cells.
    """
    if not l.braids:
        return 0
    pitch = l.config.pitch
    pps = l.config.pieces_per_step
    by_slice: dict[int, list[tuple[int, int]]] = {}
    for b in l.braids:
        tp = (b.time - 1) * pps
        lo = min(b.from_track, b.to_track)
        hi = max(b.from_track, b.to_track)
        by_slice.setdefault(tp, []).append((lo, hi))

    events: list[tuple[int, int, int]] = []  # (piece time, +1/-1, track id)
    for tr in l.tracks:
        if tr.t1 > tr.t0:
            events.append((tr.t0, 1, tr.id))
            events.append((tr.t1, -1, tr.id))
    events.sort()

    n_tracks = len(l.tracks)
    fen = _Fenwick(max(n_tracks, 1))
    ev = 0
    total = 0
    for tp in sorted(by_slice):
        while ev < len(events) and events[ev][0] <= tp:
            _, delta, tid = events[ev]
            fen.add(tid, delta)
            ev += 1
        # merge track-index intervals, then measure in pieces
        spans = sorted(by_slice[tp])
        merged: list[list[int]] = []
        for lo, hi in spans:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        for lo, hi in merged:
            union_pieces = hi * pitch - lo * pitch + 1
            alive_rails = fen.range_sum(lo, hi)
            total += 2 * (union_pieces - alive_rails)
    return total


def estimate_resources(l: PlumbingLayout) -> ResourceEstimate:
    """Bounding-box and exact occupied-piece counts for a layout."""
    x_extent, y_extent, t_extent = l.bounding_box
    rail_volume = sum(2 * (tr.t1 - tr.t0) for tr in l.tracks)
    box_volume = len(l.boxes) * l.spec.dx * l.spec.dy * l.spec.dz
    occupied = rail_volume + box_volume + _braid_volume(l)
    return ResourceEstimate(
        bounding_volume=x_extent * y_extent * t_extent,
        occupied_volume=occupied,
        box_count=len(l.boxes),
        track_count=len(l.tracks),
        duration=t_extent,
        footprint=x_extent * y_extent,
    )


# --- layout document (JSON) -----------------------------------------------------

def layout_document(l: PlumbingLayout) -> dict:
    return {
        "bounding_box": list(l.bounding_box),
        "config": {
            "pitch": l.config.pitch,
            "qubit_depth": l.config.qubit_depth,
            "pieces_per_step": l.config.pieces_per_step,
            "box_dims": [l.spec.dx, l.spec.dy, l.spec.dz],
        },
        "tracks": [
            {"id": t.id, "x": t.x, "t0": t.t0, "t1": t.t1} for t in l.tracks
        ],
        "braids": [
            {
                "time": b.time,
                "from_track": b.from_track,
                "to_track": b.to_track,
                "cells": [list(cell) for cell in b.cells(l.config)],
            }
            for b in l.braids
        ],
        "boxes": [
            {
                "index": b.index,
                "start": b.start,
                "x": b.x,
                "dims": [l.spec.dx, l.spec.dy, l.spec.dz],
            }
            for b in l.boxes
        ],
        "estimate": estimate_resources(l).to_dict(),
    }


def export_layout(l: PlumbingLayout) -> str:
    """Serialize to the layout document; importing it back is the identity."""
    return json.dumps(layout_document(l), sort_keys=True, separators=(",", ":"))


def import_layout(text: str) -> PlumbingLayout:
    doc = json.loads(text)
    try:
        cfg = GeometryConfig(
            pitch=doc["config"]["pitch"],
            qubit_depth=doc["config"]["qubit_depth"],
            pieces_per_step=doc["config"]["pieces_per_step"],
        )
        dims = [tuple(b["dims"]) for b in doc["boxes"]]
        dims.extend([tuple(doc["config"].get("box_dims", dims[0] if dims else (4, 4, 5)))])
        if len(set(dims)) != 1:
            raise InconsistentSchedule("boxes with mixed dimensions")
        spec = BoxSpec(*dims[0])
        tracks = tuple(
            Track(t["id"], t["x"], t["t0"], t["t1"]) for t in doc["tracks"]
        )
        braids = tuple(
            Braid(b["time"], b["from_track"], b["to_track"]) for b in doc["braids"]
        )
        boxes = tuple(
            PlacedBox(b["index"], b["start"], b["x"]) for b in doc["boxes"]
        )
        bounding = tuple(doc["bounding_box"])
    except (KeyError, TypeError) as err:
        raise InconsistentSchedule(f"bad layout document: {err}") from None
    return PlumbingLayout(tracks, braids, boxes, spec, cfg, bounding)  # type: ignore[arg-type]
