"""Exhaustive template optimization over user-supplied rewrite rules.

Rules are data (.qrules files): a pattern over wire variables, a
replacement, and an output map for teleported wires.  The optimizer runs
a breadth-first search over every reachable circuit, deduplicated by
canonical form, and reports the best one under the chosen objective.
"""
from qplumb import exhaustive_optimize, parse_circuit, serialize_circuit
from qplumb.rewrite import RuleSet, example_cancellation, parse_rules, toffoli_lowering

# The bundled cancellation rule: two equal CNOTs annihilate.
noisy = parse_circuit(["cx 0 1|0", "cx 0 1|0", "cx 0 1|0", "t 0|0"])
best, report = exhaustive_optimize(noisy, example_cancellation())
print("input :", [l for l in serialize_circuit(noisy) if not l.startswith(".")])
print("output:", [l for l in serialize_circuit(best) if not l.startswith(".")])
print("report:", report.to_dict())

# Custom rules compose with the bundled ones; here ccx lowering enables
# cancellations that were invisible at the Toffoli level.
rules = RuleSet(toffoli_lowering().rules + example_cancellation().rules)
circuit = parse_circuit(["ccx 0 1 2|0", "cx 0 1|0", "cx 0 1|0"])
best, report = exhaustive_optimize(circuit, rules, budget=10_000)
print("\nwith ccx lowering available:")
print("objective", report.initial_objective, "->", report.best_objective)
print("winning path:", report.path)

# Rules can be written inline as well as loaded from files.
swap_rule = parse_rules(
    """
    rule hadamard_pair
    pattern:
    h w0
    h w0
    replace:
    end
    """
)
hh = parse_circuit(["h 3|0", "h 3|0"])
best, _ = exhaustive_optimize(hh, RuleSet(tuple(swap_rule)))
print("\nh;h cancels to", len(best), "gates")
