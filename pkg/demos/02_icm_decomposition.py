"""Clifford+T to ICM: template-driven teleportation gadgets.

ICM circuits contain only qubit initialisations, CNOTs, and single-qubit
measurements; every T, S, and H becomes a fixed teleportation shape with
a known ancilla cost (T: 2, S: 1, H: 3).  `init <w> A` lines mark magic
state consumptions; the layout stage later supplies each one from a
distillation box.
"""
from qplumb import decompose_to_icm, gen_random_cliffordt, metrics, parse_circuit, serialize_circuit
from qplumb.rewrite import lower_gates, toffoli_lowering
from qplumb.generators import gen_adder

single_t = parse_circuit(["t 0|0"])
print("t 0 expands to:")
for line in serialize_circuit(decompose_to_icm(single_t)):
    print(" ", line)

# Ancilla cost is exactly 2*T + 1*S + 3*H.
clifford_t = gen_random_cliffordt(n=6, m=60, seed=4)
icm = decompose_to_icm(clifford_t)
by_kind = {}
for g in clifford_t:
    by_kind[g.kind.name] = by_kind.get(g.kind.name, 0) + 1
print("\ninput kinds:", by_kind)
print("ancillae added:", icm.wire_count - clifford_t.wire_count)
print("output alphabet:", sorted({g.kind.name for g in icm}))
print("wire remap (original -> carrier):", icm.metadata["icm_wire_map"][:60], "...")

# Toffolis are lowered to {h, t, tdg, cx} first, then decomposed.
adder = gen_adder(2)
lowered = lower_gates(adder, toffoli_lowering())
adder_icm = decompose_to_icm(lowered)
print("\nadder n=2:", len(adder), "gates ->", len(lowered), "Clifford+T ->", len(adder_icm), "ICM")
print("adder ICM t-state consumptions:", sum(
    1 for g in adder_icm if g.kind.name == "init" and g.kind.tag_payload == "A"
))
print("metrics:", metrics(adder_icm).to_dict())
