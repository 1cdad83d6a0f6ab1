"""From an ICM circuit to plumbing pieces: boxes, braids, bounding box.

The layout template: qubit tracks run along time at a fixed pitch,
CNOT braids loop between tracks, and distillation boxes sit in a row
behind the qubit plane, one per magic-state consumption, started just in
time under a concurrency cap.  Resources are counted in plumbing pieces.
"""
import json

from qplumb import (
    BoxSpec,
    GeometryConfig,
    build_layout,
    decompose_to_icm,
    estimate_resources,
    export_layout,
    gen_random_cliffordt,
    schedule_boxes,
)
from qplumb.schedule import recycle_wires, schedule_asap

icm = schedule_asap(decompose_to_icm(gen_random_cliffordt(n=4, m=25, seed=2)))
print("ICM circuit:", len(icm), "gates on", icm.wire_count, "wires")

# Wire recycling packs disjoint lifetimes onto shared tracks first.
recycled, track_map = recycle_wires(icm)
print("tracks after recycling:", recycled.wire_count)

spec = BoxSpec(dx=4, dy=4, dz=5)
schedule, adjusted = schedule_boxes(recycled, spec, concurrent=1)
print("distillation boxes:", len(schedule.boxes))
print("first box starts:", [b.start for b in schedule.boxes[:5]])

layout = build_layout(adjusted, spec, schedule, GeometryConfig(pitch=2, qubit_depth=2))
estimate = estimate_resources(layout)
print("\nbounding box (X, Y, T):", layout.bounding_box)
for key, value in estimate.to_dict().items():
    print(f"  {key:>16}: {value}")

# A bigger factory farm trades footprint for depth.
wide_schedule, wide_adjusted = schedule_boxes(recycled, spec, concurrent=4)
wide = estimate_resources(build_layout(wide_adjusted, spec, wide_schedule))
print("\nconcurrent=4 instead of 1:")
print("  duration:", estimate.duration, "->", wide.duration)
print("  footprint:", estimate.footprint, "->", wide.footprint)

# The document the 3D viewer consumes.
doc = json.loads(export_layout(layout))
print("\nlayout document:", {k: len(v) if isinstance(v, list) else v for k, v in doc.items() if k != 'estimate'})
