"""The gate-list language: parsing, scheduling semantics, metrics.

Circuits travel between components as plain lists of strings, one gate
per line.  Unscheduled gates are placed relatively and may carry a
signed offset after `|`; scheduled gates are pinned with `time@`.
"""
from qplumb import metrics, parse_circuit, parse_gate, serialize_circuit, serialize_gate
from qplumb.schedule import schedule_asap

# Two spellings of the same CNOT: relative vs pinned.
relative = parse_gate("cx 4 0|0")
pinned = parse_gate("1@cx 4 0")
print("relative:", relative)
print("pinned:  ", pinned)

# Round trip is exact: parse . serialize is the identity.
assert parse_gate(serialize_gate(relative)) == relative

# Offsets shift a gate into the future *when the scheduler runs*.
# Its base coordinate here is 1, the offset adds 3, so it lands at 4.
circuit = parse_circuit(["cx 4 0|3"])
print("\nASAP with offset 3:", serialize_circuit(schedule_asap(circuit))[-1])

# A longer program; depth only exists once everything is scheduled.
program = parse_circuit(
    [
        ".wires 3",
        "t 0|0",
        "cx 0 1|0",
        "t 2|0",
        "cx 1 2|0",
        "t 1|0",
    ]
)
scheduled = schedule_asap(program)
print("\nscheduled program:")
for line in serialize_circuit(scheduled):
    print(" ", line)
print("metrics:", metrics(scheduled).to_dict())
