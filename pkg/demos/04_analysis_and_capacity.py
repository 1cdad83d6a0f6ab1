"""T-gate demand vs magic-state supply: histograms, capacity, availability.

Distillation hardware produces states at a fixed rhythm; T gates consume
them.  The analysis passes answer: how are T gates distributed over time
windows, and what happens to the schedule when supply is tight?
"""
from qplumb import (
    FactoryConfig,
    analysis_report,
    enforce_t_capacity,
    gen_random_cliffordt,
    serialize_circuit,
    simulate_availability,
    t_histogram,
)
from qplumb.schedule import schedule_asap

circuit = schedule_asap(gen_random_cliffordt(n=4, m=30, seed=11))

# Where do the T gates sit, in windows matching one distillation round?
hist = t_histogram(circuit, window=5)
print("T histogram (window 5):")
for start, count in hist.bins:
    print(f"  t={start:>3}: {'#' * count} ({count})")

# A single factory with one distillation every 5 steps: T gates beyond
# one per window are pushed into the next window until it all fits.
capped = enforce_t_capacity(circuit, window=5, capacity=1)
print("\ndepth before capacity cap:", max(g.time for g in circuit.gates))
print("depth after capacity cap: ", max(g.time for g in capped.gates))

# Availability simulation: the same pressure, expressed as a running
# stock of distilled states.  Starving T gates wait for production.
factory = FactoryConfig(concurrent=1, duration=5, warmup_allowed=True)
trace, adjusted, delays = simulate_availability(circuit, factory)
print("\navailability with", factory)
print("  produced:", sum(trace.produced), "consumed:", trace.cumulative_consumed())
print("  delays applied:", delays)
print("  stock never negative:", all(level >= 0 for level in trace.available))

# Everything bundled for plotting or the web UI:
doc = analysis_report(circuit, factory=factory)
print("\nreport keys:", sorted(doc))
print("first bins:", doc["histogram"]["bins"][:4])

# The adjusted circuit is a normal circuit again.
print("\nfirst lines of the supply-feasible schedule:")
for line in serialize_circuit(adjusted)[:6]:
    print(" ", line)
