"""qplumb: Clifford+T circuit preparation and plumbing-piece resource estimation.

The toolkit compiles Clifford+T gate lists into ICM form (init / cx / mz
/ mx), schedules them, analyses T-gate demand against magic-state
distillation capacity, places distillation boxes, builds a simplified
braided-defect layout, and counts resources in plumbing pieces.  All
components exchange circuits as lists of strings and compose like a Unix
pipeline, via the library, the ``qplumb`` CLI, or the HTTP service.
"""
from .analysis import (
    AvailabilityTrace,
    FactoryConfig,
    TDistribution,
    analysis_report,
    enforce_t_capacity,
    simulate_availability,
    t_histogram,
)
from .gatelang import (
    Circuit,
    Gate,
    GateKind,
    MetricsReport,
    Scheduled,
    Unscheduled,
    at,
    circuit,
    gate,
    metrics,
    parse_circuit,
    parse_circuit_text,
    parse_gate,
    serialize_circuit,
    serialize_gate,
)
from .generators import (
    GeneratorSpec,
    ParamSpec,
    gen_adder,
    gen_cnot_ladder,
    gen_random_cliffordt,
    import_real,
)
from .layout import (
    BoxSchedule,
    BoxSpec,
    GeometryConfig,
    PlumbingLayout,
    ResourceEstimate,
    build_layout,
    estimate_resources,
    export_layout,
    import_layout,
    schedule_boxes,
)
from .pipeline import PipelineStage, parse_plan, run_pipeline
from .rewrite import (
    MatchSite,
    RewriteRule,
    RuleSet,
    apply_rule,
    decompose_to_icm,
    default_icm_templates,
    exhaustive_optimize,
    find_matches,
    parse_rules,
)
from .schedule import (
    Permutation,
    delay_gate,
    recycle_wires,
    reorder_first_use,
    schedule_asap,
    strip_schedule,
    swap_wires,
)

__version__ = "0.1.0"
