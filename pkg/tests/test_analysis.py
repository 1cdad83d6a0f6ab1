"""Histogram, capacity enforcement, and availability simulation."""
import pytest

from conftest import random_scheduled
from qplumb.analysis import (
    FactoryConfig,
    analysis_report,
    enforce_t_capacity,
    simulate_availability,
    t_histogram,
)
from qplumb.errors import BadParam, UnscheduledInput
from qplumb.gatelang import T_KINDS, metrics, parse_circuit
from qplumb.schedule import delay_gate


def test_histogram_example():
    c = parse_circuit(["1@t 0", "2@t 1", "5@t 0"])
    dist = t_histogram(c, 2)
    assert dist.bins == ((1, 2), (3, 0), (5, 1))


def test_histogram_no_t_gates():
    c = parse_circuit(["1@cx 0 1", "2@h 0", "3@cx 0 1"])
    dist = t_histogram(c, 2)
    assert all(count == 0 for _, count in dist.bins)
    assert dist.bins == ((1, 0), (3, 0))


def test_histogram_single_bin_when_window_covers_depth():
    c = parse_circuit(["1@t 0", "2@t 0", "3@t 0"])
    dist = t_histogram(c, 10)
    assert dist.bins == ((1, 3),)


def test_histogram_sums_to_t_count():
    for seed in range(10):
        c = random_scheduled(seed, n_gates=50)
        for window in (1, 2, 3, 7):
            assert t_histogram(c, window).total() == metrics(c).t_count


def test_histogram_rejects_unscheduled():
    with pytest.raises(UnscheduledInput):
        t_histogram(parse_circuit(["t 0|0"]), 2)


def test_enforce_two_ts_in_one_window():
    c = parse_circuit(["1@t 0", "1@t 1"])
    out = enforce_t_capacity(c, 3, 1)
    times = sorted(g.time for g in out if g.kind.name == "t")
    assert times == [1, 4]  # second moves to the next window start


def test_enforce_fixpoint_when_already_satisfied():
    c = parse_circuit(["1@t 0", "9@t 1"])
    assert enforce_t_capacity(c, 3, 1) == c


def test_enforce_capacity_above_t_count_is_identity():
    c = parse_circuit(["1@t 0", "1@t 1", "1@t 2"])
    assert enforce_t_capacity(c, 4, 3) == c


def _window_recount(c, window, capacity):
    """Brute-force recount over every aligned window."""
    depth = max((g.time for g in c.gates), default=0)
    start = 1
    while start <= depth:
        count = sum(
            1 for g in c.gates if g.kind.name in T_KINDS and start <= g.time < start + window
        )
        assert count <= capacity, f"window at {start} holds {count} > {capacity}"
        start += window


def _per_wire_orders(c):
    orders = {}
    for w in range(c.wire_count):
        orders[w] = [
            i
            for i, _ in sorted(
                ((i, g) for i, g in enumerate(c.gates) if w in g.operands),
                key=lambda p: p[1].time,
            )
        ]
    return orders


def test_enforce_brute_force_recount_and_order_preserved():
    for seed in range(15):
        c = random_scheduled(seed, n_wires=5, n_gates=40)
        for window, capacity in ((3, 1), (2, 2)):
            out = enforce_t_capacity(c, window, capacity)
            _window_recount(out, window, capacity)
            assert _per_wire_orders(out) == _per_wire_orders(c)


def test_availability_single_t_executes_on_time():
    c = parse_circuit(["1@t 0"])
    trace, adjusted, delays = simulate_availability(c, FactoryConfig(1, 5, True))
    assert adjusted == c
    assert delays == []
    assert trace.consumed[0] == 1
    assert trace.available[0] == 0  # produced 1, consumed 1


def test_availability_three_ts_spread_across_batches():
    c = parse_circuit(["1@t 0", "1@t 1", "1@t 2"])
    trace, adjusted, delays = simulate_availability(c, FactoryConfig(1, 5, True))
    assert sorted(g.time for g in adjusted) == [1, 6, 11]
    assert trace.cumulative_consumed() == 3
    assert [d for _, d in delays] == [5, 10]


def test_availability_no_t_gates_flat_trace():
    c = parse_circuit(["1@cx 0 1", "2@cx 1 0"])
    trace, adjusted, delays = simulate_availability(c, FactoryConfig(1, 3, True))
    assert adjusted == c
    assert delays == []
    assert trace.consumed == (0, 0)
    assert list(trace.available) == sorted(trace.available)


def test_availability_cold_start_delays_first_t():
    c = parse_circuit(["1@t 0"])
    _, adjusted, _ = simulate_availability(c, FactoryConfig(1, 4, False))
    assert adjusted.gates[0].time == 5  # first batch at 1 + duration


def _availability_reference(c, factory):
    """Literal sweep: delay_gate each starving T to the next production step."""

    def produced_cum(t):
        if t < factory.first_batch:
            return 0
        return factory.concurrent * (1 + (t - factory.first_batch) // factory.duration)

    def next_production_after(t):
        if t < factory.first_batch:
            return factory.first_batch
        k = (t - factory.first_batch) // factory.duration + 1
        return factory.first_batch + k * factory.duration

    consumed: dict[int, int] = {}
    while True:
        pending = sorted(
            (g.time, g.operands[0], i)
            for i, g in enumerate(c.gates)
            if g.kind.name in T_KINDS and i not in consumed
        )
        if not pending:
            break
        time, _, idx = pending[0]
        stock = produced_cum(time) - sum(1 for t in consumed.values() if t <= time)
        if stock > 0:
            consumed[idx] = time
        else:
            c = delay_gate(c, idx, next_production_after(time) - time)
    return c, consumed


@pytest.mark.parametrize("duration,concurrent,warmup", [(3, 1, True), (2, 2, True), (4, 1, False)])
def test_availability_matches_literal_reference(duration, concurrent, warmup):
    factory = FactoryConfig(concurrent, duration, warmup)
    for seed in range(8):
        c = random_scheduled(seed, n_wires=5, n_gates=30)
        _, adjusted, _ = simulate_availability(c, factory)
        ref_circuit, ref_consumed = _availability_reference(c, factory)
        assert adjusted == ref_circuit
        got = sorted(
            g.time for g in adjusted.gates if g.kind.name in T_KINDS
        )
        assert got == sorted(ref_consumed.values())


def test_availability_invariants_over_corpus():
    for seed in range(10):
        c = random_scheduled(seed + 200, n_wires=6, n_gates=40)
        trace, adjusted, _ = simulate_availability(c, FactoryConfig(1, 3, True))
        assert all(level >= 0 for level in trace.available)
        assert trace.cumulative_consumed() == metrics(c).t_count
        # states are consumed no earlier than produced
        running = 0
        for produced, consumed in zip(trace.produced, trace.consumed):
            running += produced
            assert consumed <= running
            running -= consumed


def test_availability_shorter_duration_never_deeper():
    for seed in range(8):
        c = random_scheduled(seed + 300, n_wires=5, n_gates=30)
        depths = []
        for duration in (6, 4, 2, 1):
            _, adjusted, _ = simulate_availability(c, FactoryConfig(1, duration, True))
            depths.append(max(g.time for g in adjusted.gates))
        for earlier, later in zip(depths, depths[1:]):
            assert later <= earlier


def test_report_empty_circuit():
    doc = analysis_report(parse_circuit([]))
    assert doc["metrics"]["gate_count"] == 0
    assert doc["histogram"]["bins"] == []
    assert doc["availability"]["series"]["consumed"] == []
    assert doc["delays_applied"] == []


def test_report_conservation():
    c = random_scheduled(9, n_gates=40)
    doc = analysis_report(c, window=4)
    t_count = doc["metrics"]["t_count"]
    assert sum(count for _, count in doc["histogram"]["bins"]) == t_count
    assert sum(doc["availability"]["series"]["consumed"]) == t_count


def test_report_window_defaults_to_duration():
    c = random_scheduled(10, n_gates=30)
    doc = analysis_report(c, factory=FactoryConfig(1, 7, True))
    assert doc["histogram"]["window"] == 7


def test_factory_config_validation():
    with pytest.raises(BadParam):
        FactoryConfig(0, 5)
    with pytest.raises(BadParam):
        FactoryConfig(1, 0)
