"""ASAP scheduling, wire reordering/recycling, targeted delays."""
import random

import pytest

from conftest import random_scheduled, random_unscheduled
from qplumb.errors import (
    BadIndex,
    BadWire,
    NonLinearLifetime,
    OffsetConflict,
    ScheduledInput,
)
from qplumb.gatelang import metrics, parse_circuit, serialize_circuit
from qplumb.generators import gen_random_cliffordt
from qplumb.rewrite import decompose_to_icm
from qplumb.schedule import (
    delay_gate,
    recycle_wires,
    reorder_first_use,
    schedule_asap,
    strip_schedule,
    swap_wires,
    wire_lifetimes,
)


def test_asap_single_gate():
    out = schedule_asap(parse_circuit(["cx 4 0|0"]))
    assert serialize_circuit(out)[-1] == "1@cx 4 0"


def test_asap_offset_arithmetic():
    out = schedule_asap(parse_circuit(["t 4|0", "cx 4 0|3"]))
    lines = [ln for ln in serialize_circuit(out) if not ln.startswith(".")]
    assert lines == ["1@t 4", "5@cx 4 0"]  # base 2 + offset 3


def test_asap_base_one_plus_three():
    out = schedule_asap(parse_circuit(["cx 4 0|3"]))
    assert serialize_circuit(out)[-1] == "4@cx 4 0"  # 1 + 3 = 4


def test_asap_independent_wires_share_time():
    out = schedule_asap(parse_circuit(["t 0|0", "t 1|0"]))
    assert [g.time for g in out] == [1, 1]


def test_asap_offset_conflict():
    with pytest.raises(OffsetConflict):
        schedule_asap(parse_circuit(["cx 0 1|0", "t 0|-1"]))


def test_asap_rejects_scheduled_gates():
    with pytest.raises(ScheduledInput):
        schedule_asap(parse_circuit(["1@t 0", "t 1|0"]))


def test_asap_strip_reschedule_idempotent():
    for seed in range(10):
        c = random_unscheduled(seed, n_wires=8, n_gates=50)
        once = schedule_asap(c)
        again = schedule_asap(strip_schedule(once))
        assert once == again


def _longest_path_times(c):
    """Independent oracle: 1 + longest dependency chain strictly before."""
    best: dict[int, int] = {}
    times = []
    for g in c.gates:
        t = 1 + max((best.get(w, 0) for w in g.operands), default=0)
        times.append(t)
        for w in g.operands:
            best[w] = t
    return times


def test_asap_equals_longest_path_oracle():
    for seed in range(10):
        c = random_unscheduled(seed + 100, n_wires=10, n_gates=60)
        out = schedule_asap(c)
        assert [g.time for g in out] == _longest_path_times(c)


def test_reorder_first_use_example():
    c = parse_circuit(["cx 2 0|0", "t 1|0"])
    out, perm = reorder_first_use(c)
    assert perm == {2: 0, 0: 1, 1: 2}
    lines = [ln for ln in serialize_circuit(out) if not ln.startswith(".")]
    assert lines == ["cx 0 1|0", "t 2|0"]


def test_reorder_identity_when_sorted():
    c = parse_circuit(["cx 0 1|0", "t 2|0"])
    out, perm = reorder_first_use(c)
    assert out == c
    assert perm == {0: 0, 1: 1, 2: 2}


def test_reorder_empty():
    out, perm = reorder_first_use(parse_circuit([]))
    assert len(out) == 0
    assert perm == {}


def test_reorder_unused_wires_go_last_in_order():
    c = parse_circuit([".wires 5", "t 3|0"])
    _, perm = reorder_first_use(c)
    assert perm == {3: 0, 0: 1, 1: 2, 2: 3, 4: 4}


def test_reorder_preserves_counts():
    for seed in range(5):
        c = random_unscheduled(seed, n_wires=7, n_gates=40)
        out, _ = reorder_first_use(c)
        assert metrics(out).t_count == metrics(c).t_count
        assert [g.kind for g in out] == [g.kind for g in c]


def test_swap_example():
    out = swap_wires(parse_circuit(["cx 0 1|0"]), 0, 1)
    assert serialize_circuit(out)[-1] == "cx 1 0|0"


def test_swap_same_wire_is_identity():
    c = parse_circuit(["cx 0 1|0"])
    assert swap_wires(c, 1, 1) == c


def test_swap_is_involution():
    c = random_unscheduled(4, n_wires=6, n_gates=30)
    assert swap_wires(swap_wires(c, 2, 5), 2, 5) == c


def test_swap_bad_wire():
    with pytest.raises(BadWire):
        swap_wires(parse_circuit(["cx 0 1|0"]), 0, 7)


def test_recycle_sequential_lifetimes_share_track():
    c = parse_circuit(
        ["1@cx 0 1", "3@mz 0", "5@init 2 ZERO", "6@cx 2 1"]
    )
    out, tracks = recycle_wires(c)
    assert tracks[0] == tracks[2]  # wire 0 dies at 3, wire 2 born at 5
    assert out.wire_count == 2


def test_recycle_overlapping_lifetimes_two_tracks():
    c = parse_circuit(["1@t 0", "2@cx 0 1"])
    out, tracks = recycle_wires(c)
    assert tracks[0] != tracks[1]
    assert out.wire_count == 2


def test_recycle_empty():
    out, tracks = recycle_wires(parse_circuit([]))
    assert out.wire_count == 0
    assert tracks == {}


def test_recycle_rejects_use_after_measure():
    c = parse_circuit(["1@mz 0", "2@t 0"])
    with pytest.raises(NonLinearLifetime):
        recycle_wires(c)


def test_recycle_rejects_use_before_init():
    c = parse_circuit(["1@t 0", "2@init 0 ZERO"])
    with pytest.raises(NonLinearLifetime):
        recycle_wires(c)


def test_recycle_random_icm_tracks_have_disjoint_lifetimes():
    for seed in range(10):
        c = schedule_asap_icm(seed)
        out, tracks = recycle_wires(c)
        assert out.wire_count <= c.wire_count
        by_track: dict[int, list] = {}
        for lt in wire_lifetimes(c):
            by_track.setdefault(tracks[lt.wire], []).append(lt)
        for members in by_track.values():
            members.sort(key=lambda lt: lt.birth)
            for earlier, later in zip(members, members[1:]):
                assert earlier.death < later.birth


def schedule_asap_icm(seed: int):
    from qplumb.schedule import schedule_asap

    return schedule_asap(decompose_to_icm(gen_random_cliffordt(5, 40, seed)))


def test_delay_only_gate():
    c = parse_circuit(["1@t 0"])
    out = delay_gate(c, 0, 3)
    assert out.gates[0].time == 4


def test_delay_pushes_dependents():
    c = parse_circuit(["1@t 0", "2@cx 0 1"])
    out = delay_gate(c, 0, 1)
    assert [g.time for g in out] == [2, 3]


def test_delay_leaves_independent_gates_alone():
    c = parse_circuit(["1@t 0", "1@t 1"])
    out = delay_gate(c, 0, 5)
    assert [g.time for g in out] == [6, 1]


def test_delay_bad_index():
    with pytest.raises(BadIndex):
        delay_gate(parse_circuit(["1@t 0"]), 4, 1)


def test_delay_preserves_per_wire_order():
    rng = random.Random(0)
    for seed in range(10):
        c = random_scheduled(seed, n_wires=6, n_gates=40)
        idx = rng.randrange(len(c.gates))
        out = delay_gate(c, idx, rng.randrange(1, 6))
        for wire in range(c.wire_count):
            before = [i for i, g in sorted(enumerate(c.gates), key=lambda p: p[1].time) if wire in g.operands]
            after = [i for i, g in sorted(enumerate(out.gates), key=lambda p: p[1].time) if wire in g.operands]
            assert before == after
