"""Shared test oracles: classical simulation and random circuit builders."""
from __future__ import annotations

import random

from qplumb.gatelang import Circuit, circuit, gate


def simulate_classical(c: Circuit, bits: list[int]) -> list[int]:
    """Classical truth-table simulator for {x, cx, ccx} circuits."""
    state = list(bits)
    assert len(state) == c.wire_count
    for g in c.gates:
        name = g.kind.name
        if name == "x":
            state[g.operands[0]] ^= 1
        elif name == "cx":
            control, target = g.operands
            state[target] ^= state[control]
        elif name == "ccx":
            c1, c2, target = g.operands
            state[target] ^= state[c1] & state[c2]
        else:
            raise AssertionError(f"not classically simulable: {name}")
    return state


def random_unscheduled(
    seed: int, n_wires: int = 6, n_gates: int = 30, kinds=("h", "s", "t", "cx")
) -> Circuit:
    rng = random.Random(seed)
    gates = []
    for _ in range(n_gates):
        kind = rng.choice(kinds)
        if kind in ("cx",):
            a, b = rng.sample(range(n_wires), 2)
            gates.append(gate(kind, a, b))
        elif kind == "ccx":
            a, b, c = rng.sample(range(n_wires), 3)
            gates.append(gate(kind, a, b, c))
        else:
            gates.append(gate(kind, rng.randrange(n_wires)))
    return circuit(gates, wire_count=n_wires)


def random_scheduled(seed: int, n_wires: int = 6, n_gates: int = 30, kinds=("h", "s", "t", "cx")) -> Circuit:
    from qplumb.schedule import schedule_asap

    return schedule_asap(random_unscheduled(seed, n_wires, n_gates, kinds))
