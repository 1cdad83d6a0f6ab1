"""Composable stage registry: every operation as list-of-strings in/out.

Stages behave like a Unix pipeline; the output lines of one stage feed
the next.  Three stage kinds exist:

* ``transformation`` -- circuit in, circuit out (generators ignore input),
* ``analysis`` -- circuit in; either passes the delay-adjusted circuit on
  (``analyze.availability``, ``analyze.enforce``) or emits a report
  document (``analyze.t-dist``, ``analyze.report``),
* ``export`` -- emits a layout or estimate document.

``layout.estimate`` accepts either a layout document or a circuit (it
builds the layout internally), so estimation pipelines never materialise
the full geometry document.

Plan files hold one stage per line: ``name key=value ...``.
"""
from __future__ import annotations

import json
import shlex
from dataclasses import dataclass
from typing import Callable

from . import analysis, generators, layout, rewrite, schedule
from .errors import BadParam, NotFound, QPlumbError, StageError
from .gatelang import metrics, parse_circuit, serialize_circuit
from .generators import ParamSpec


@dataclass(frozen=True)
class StageSpec:
    name: str
    kind: str  # transformation | analysis | export
    params: tuple[ParamSpec, ...]
    description: str
    run: Callable[[list[str], dict], list[str]]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "description": self.description,
            "params": [
                {
                    "name": p.name,
                    "kind": p.kind,
                    "default": p.default,
                    **({"choices": list(p.choices)} if p.choices else {}),
                }
                for p in self.params
            ],
        }


def _dump(doc: dict) -> list[str]:
    return [json.dumps(doc, sort_keys=True, separators=(",", ":"))]


def _coerce(spec: ParamSpec, raw: str):
    if spec.kind in ("int", "seed"):
        try:
            value = int(raw)
        except ValueError:
            raise BadParam(f"parameter {spec.name} expects an integer, got {raw!r}") from None
        if spec.kind == "seed" and value < 0:
            raise BadParam(f"seed must be >= 0, got {value}")
        return value
    if spec.kind == "enum":
        if raw not in spec.choices:
            raise BadParam(f"parameter {spec.name} must be one of {spec.choices}, got {raw!r}")
        return raw
    return raw


def resolve_params(stage: StageSpec, params: dict[str, str]) -> dict:
    known = {p.name: p for p in stage.params}
    for key in params:
        if key not in known:
            raise BadParam(f"stage {stage.name} has no parameter {key!r}")
    return {
        p.name: _coerce(p, str(params.get(p.name, p.default)))
        for p in stage.params
    }


# --- stage implementations -------------------------------------------------------

def _stage_generate(gen_name: str):
    def run(lines: list[str], params: dict) -> list[str]:
        return serialize_circuit(generators.run_generator(gen_name, **params))

    return run


def _stage_import_real(lines: list[str], params: dict) -> list[str]:
    return serialize_circuit(generators.import_real("\n".join(lines)))


def _load_ruleset(path: str, objective: str = "gate_count") -> rewrite.RuleSet:
    if not path:
        return rewrite.RuleSet(
            tuple(rewrite.load_bundled_rules("example_cancel.qrules")), objective
        )
    return rewrite.RuleSet(tuple(rewrite.load_rules_file(path)), objective)


def _stage_rewrite(lines: list[str], params: dict) -> list[str]:
    c = parse_circuit(lines)
    rs = _load_ruleset(params["rules"], params["objective"])
    best, _report = rewrite.exhaustive_optimize(c, rs, params["budget"])
    return serialize_circuit(best)


def _stage_icm(lines: list[str], params: dict) -> list[str]:
    c = parse_circuit(lines)
    if params["lower"] == "on":
        c = rewrite.lower_gates(c, rewrite.toffoli_lowering())
    templates = None
    if params["templates"]:
        templates = rewrite.RuleSet(tuple(rewrite.load_rules_file(params["templates"])))
    return serialize_circuit(rewrite.decompose_to_icm(c, templates))


def _stage_asap(lines: list[str], params: dict) -> list[str]:
    return serialize_circuit(schedule.schedule_asap(parse_circuit(lines)))


def _stage_reorder(lines: list[str], params: dict) -> list[str]:
    c, _perm = schedule.reorder_first_use(parse_circuit(lines))
    return serialize_circuit(c)


def _stage_swap(lines: list[str], params: dict) -> list[str]:
    return serialize_circuit(
        schedule.swap_wires(parse_circuit(lines), params["i"], params["j"])
    )


def _stage_recycle(lines: list[str], params: dict) -> list[str]:
    c, _tracks = schedule.recycle_wires(parse_circuit(lines))
    return serialize_circuit(c)


def _factory(params: dict) -> analysis.FactoryConfig:
    return analysis.FactoryConfig(
        concurrent=params["concurrent"],
        duration=params["duration"],
        warmup_allowed=params["warmup"] == "on",
    )


def _stage_tdist(lines: list[str], params: dict) -> list[str]:
    c = parse_circuit(lines)
    hist = analysis.t_histogram(c, params["window"])
    return _dump(
        {
            "metrics": metrics(c).to_dict(),
            "histogram": {
                "window": hist.window,
                "bins": [[start, count] for start, count in hist.bins],
            },
        }
    )


def _stage_availability(lines: list[str], params: dict) -> list[str]:
    _trace, adjusted, _delays = analysis.simulate_availability(
        parse_circuit(lines), _factory(params)
    )
    return serialize_circuit(adjusted)


def _stage_enforce(lines: list[str], params: dict) -> list[str]:
    c = analysis.enforce_t_capacity(
        parse_circuit(lines), params["window"], params["capacity"]
    )
    return serialize_circuit(c)


def _stage_report(lines: list[str], params: dict) -> list[str]:
    window = params["window"] if params["window"] > 0 else None
    return _dump(
        analysis.analysis_report(parse_circuit(lines), window, _factory(params))
    )


def _geometry(params: dict) -> tuple[layout.BoxSpec, layout.GeometryConfig, int]:
    spec = layout.BoxSpec(params["dx"], params["dy"], params["dz"])
    cfg = layout.GeometryConfig(
        pitch=params["pitch"],
        qubit_depth=params["qubit_depth"],
        pieces_per_step=params["pieces_per_step"],
    )
    return spec, cfg, params["concurrent"]


def _build_from_circuit(lines: list[str], params: dict) -> layout.PlumbingLayout:
    c = parse_circuit(lines)
    spec, cfg, concurrent = _geometry(params)
    box_schedule, adjusted = layout.schedule_boxes(c, spec, concurrent)
    return layout.build_layout(adjusted, spec, box_schedule, cfg)


def _stage_layout_build(lines: list[str], params: dict) -> list[str]:
    return [layout.export_layout(_build_from_circuit(lines, params))]


def _looks_like_document(lines: list[str]) -> bool:
    for line in lines:
        stripped = line.strip()
        if stripped:
            return stripped.startswith("{")
    return False


def _stage_layout_estimate(lines: list[str], params: dict) -> list[str]:
    if _looks_like_document(lines):
        built = layout.import_layout("\n".join(lines))
    else:
        built = _build_from_circuit(lines, params)
    return _dump(layout.estimate_resources(built).to_dict())


def _stage_load(lines: list[str], params: dict) -> list[str]:
    return str(params["text"]).splitlines()


def _stage_metrics(lines: list[str], params: dict) -> list[str]:
    return _dump(metrics(parse_circuit(lines)).to_dict())


_GEOMETRY_PARAMS = (
    ParamSpec("dx", "int", "4"),
    ParamSpec("dy", "int", "4"),
    ParamSpec("dz", "int", "5"),
    ParamSpec("concurrent", "int", "1"),
    ParamSpec("pitch", "int", "2"),
    ParamSpec("qubit_depth", "int", "2"),
    ParamSpec("pieces_per_step", "int", "1"),
)

_FACTORY_PARAMS = (
    ParamSpec("duration", "int", "5"),
    ParamSpec("concurrent", "int", "1"),
    ParamSpec("warmup", "enum", "on", ("on", "off")),
)


def _registry() -> dict[str, StageSpec]:
    stages = [
        StageSpec(
            "generate.cnot-ladder",
            "transformation",
            (ParamSpec("n", "int", "4"),),
            "Chain of CNOTs cx(i, i+1)",
            _stage_generate("cnot-ladder"),
        ),
        StageSpec(
            "generate.adder",
            "transformation",
            (ParamSpec("n", "int", "4"),),
            "Ripple-carry adder on 2n+2 wires",
            _stage_generate("adder"),
        ),
        StageSpec(
            "generate.random-cliffordt",
            "transformation",
            (
                ParamSpec("n", "int", "8"),
                ParamSpec("m", "int", "100"),
                ParamSpec("seed", "seed", "0"),
            ),
            "Seeded uniform circuit over {h, s, t, cx}",
            _stage_generate("random-cliffordt"),
        ),
        StageSpec(
            "import.real",
            "transformation",
            (),
            "Import the RevKit .real Toffoli subset",
            _stage_import_real,
        ),
        StageSpec(
            "load",
            "transformation",
            (ParamSpec("text", "str", ""),),
            "Replace the stream with literal gate-list text",
            _stage_load,
        ),
        StageSpec(
            "rewrite",
            "transformation",
            (
                ParamSpec("rules", "str", ""),
                ParamSpec(
                    "objective",
                    "enum",
                    "gate_count",
                    ("gate_count", "t_count", "cnot_count", "weighted"),
                ),
                ParamSpec("budget", "int", "100000"),
            ),
            "Exhaustive template optimization (bundled cancellation rules by default)",
            _stage_rewrite,
        ),
        StageSpec(
            "icm",
            "transformation",
            (
                ParamSpec("templates", "str", ""),
                ParamSpec("lower", "enum", "on", ("on", "off")),
            ),
            "Decompose to init/cx/mz/mx via templates (ccx lowered first)",
            _stage_icm,
        ),
        StageSpec("schedule.asap", "transformation", (), "Assign ASAP time coordinates", _stage_asap),
        StageSpec(
            "schedule.reorder-first-use",
            "transformation",
            (),
            "Renumber wires by first usage",
            _stage_reorder,
        ),
        StageSpec(
            "schedule.swap",
            "transformation",
            (ParamSpec("i", "int", "0"), ParamSpec("j", "int", "0")),
            "Exchange two wires",
            _stage_swap,
        ),
        StageSpec(
            "schedule.recycle",
            "transformation",
            (),
            "Pack disjoint wire lifetimes onto shared tracks",
            _stage_recycle,
        ),
        StageSpec(
            "analyze.t-dist",
            "analysis",
            (ParamSpec("window", "int", "5"),),
            "T gates per aligned time window (report document)",
            _stage_tdist,
        ),
        StageSpec(
            "analyze.availability",
            "analysis",
            _FACTORY_PARAMS,
            "Delay T gates to the magic-state supply; passes the adjusted circuit on",
            _stage_availability,
        ),
        StageSpec(
            "analyze.enforce",
            "analysis",
            (ParamSpec("window", "int", "5"), ParamSpec("capacity", "int", "1")),
            "Delay T gates until every window holds at most `capacity`",
            _stage_enforce,
        ),
        StageSpec(
            "analyze.report",
            "analysis",
            (ParamSpec("window", "int", "0"),) + _FACTORY_PARAMS,
            "Full analysis document (window 0 = factory duration)",
            _stage_report,
        ),
        StageSpec(
            "metrics",
            "analysis",
            (),
            "Gate/T/CNOT counts and depth",
            _stage_metrics,
        ),
        StageSpec(
            "layout.build",
            "export",
            _GEOMETRY_PARAMS,
            "Boxes + braided geometry as a layout document",
            _stage_layout_build,
        ),
        StageSpec(
            "layout.estimate",
            "export",
            _GEOMETRY_PARAMS,
            "Resource estimate from a circuit or a layout document",
            _stage_layout_estimate,
        ),
    ]
    return {s.name: s for s in stages}


REGISTRY: dict[str, StageSpec] = _registry()


@dataclass(frozen=True)
class PipelineStage:
    name: str
    params: dict[str, str]


def run_stage(stage: PipelineStage, lines: list[str]) -> list[str]:
    spec = REGISTRY.get(stage.name)
    if spec is None:
        raise NotFound(f"unknown stage {stage.name!r}")
    return spec.run(lines, resolve_params(spec, stage.params))


def run_pipeline(stages: list[PipelineStage], input_lines: list[str]) -> list[str]:
    """Feed `input_lines` through the stages; empty pipelines are the identity."""
    lines = list(input_lines)
    for index, stage in enumerate(stages):
        try:
            lines = run_stage(stage, lines)
        except QPlumbError as err:
            raise StageError(index, stage.name, err) from err
    return lines


def parse_plan(text: str) -> list[PipelineStage]:
    """One stage per line: ``name key=value ...``; # comments allowed."""
    stages = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = shlex.split(line)
        params: dict[str, str] = {}
        for token in tokens[1:]:
            if "=" not in token:
                raise BadParam(f"bad plan parameter {token!r} (expected key=value)")
            key, _, value = token.partition("=")
            params[key] = value
        stages.append(PipelineStage(tokens[0], params))
    return stages
