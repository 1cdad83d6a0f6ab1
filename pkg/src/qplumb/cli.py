"""Command-line front end; circuits travel on stdin/stdout as ``.qlist`` text.

Subcommands mirror the pipeline stage registry, so composing shell pipes
and running a plan file through ``qplumb pipeline`` produce identical
bytes.  ``analyze availability`` prints the analysis document by default;
pass ``--emit-circuit`` for the delay-adjusted circuit (the behaviour of
the pipeline stage, which must stay circuit-in/circuit-out).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import analysis
from .errors import QPlumbError
from .gatelang import metrics, parse_circuit
from .pipeline import PipelineStage, parse_plan, run_pipeline, run_stage
from .service import serve


def _read_lines(args) -> list[str]:
    if getattr(args, "infile", None):
        with open(args.infile, encoding="utf-8") as fh:
            return fh.read().splitlines()
    if sys.stdin.isatty():
        return []
    return sys.stdin.read().splitlines()


def _emit(lines: list[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def _dump(doc: dict) -> None:
    _emit([json.dumps(doc, sort_keys=True, separators=(",", ":"))])


def _stage(args, name: str, **params) -> None:
    str_params = {k: str(v) for k, v in params.items() if v is not None}
    _emit(run_stage(PipelineStage(name, str_params), _read_lines(args)))


def _cmd_generate(args) -> None:
    params = {"n": args.n}
    if args.kind == "random-cliffordt":
        params.update(m=args.m, seed=args.seed)
    _stage(args, f"generate.{args.kind}", **params)


def _cmd_import(args) -> None:
    _stage(args, "import.real")


def _cmd_rewrite(args) -> None:
    _stage(args, "rewrite", rules=args.rules, objective=args.objective, budget=args.budget)


def _cmd_icm(args) -> None:
    _stage(args, "icm", templates=args.templates, lower="off" if args.no_lower else "on")


def _cmd_schedule(args) -> None:
    if args.action == "swap":
        _stage(args, "schedule.swap", i=args.i, j=args.j)
    else:
        _stage(args, f"schedule.{args.action}")


def _cmd_analyze(args) -> None:
    warmup = "off" if getattr(args, "cold_start", False) else "on"
    if args.action == "t-dist":
        _stage(args, "analyze.t-dist", window=args.window)
    elif args.action == "enforce":
        _stage(args, "analyze.enforce", window=args.window, capacity=args.capacity)
    elif args.action == "report":
        _stage(
            args,
            "analyze.report",
            window=args.window,
            duration=args.duration,
            concurrent=args.concurrent,
            warmup=warmup,
        )
    elif args.emit_circuit:
        _stage(
            args,
            "analyze.availability",
            duration=args.duration,
            concurrent=args.concurrent,
            warmup=warmup,
        )
    else:
        c = parse_circuit(_read_lines(args))
        factory = analysis.FactoryConfig(
            concurrent=args.concurrent,
            duration=args.duration,
            warmup_allowed=warmup == "on",
        )
        trace, _adjusted, delays = analysis.simulate_availability(c, factory)
        _dump(
            {
                "metrics": metrics(c).to_dict(),
                "availability": {
                    "duration": factory.duration,
                    "concurrent": factory.concurrent,
                    "warmup": factory.warmup_allowed,
                    "series": {
                        "produced": list(trace.produced),
                        "consumed": list(trace.consumed),
                        "available": list(trace.available),
                    },
                },
                "delays_applied": [[i, d] for i, d in delays],
            }
        )


def _cmd_layout(args) -> None:
    params = dict(
        dx=args.dx,
        dy=args.dy,
        dz=args.dz,
        concurrent=args.concurrent,
        pitch=args.pitch,
        qubit_depth=args.qubit_depth,
        pieces_per_step=args.pieces_per_step,
    )
    _stage(args, f"layout.{args.action}", **params)


def _cmd_pipeline(args) -> None:
    with open(args.file, encoding="utf-8") as fh:
        stages = parse_plan(fh.read())
    _emit(run_pipeline(stages, _read_lines(args)))


def _cmd_serve(args) -> None:
    print(f"serving on http://{args.host}:{args.port}", file=sys.stderr)
    serve(args.host, args.port)


def _add_io(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--in", dest="infile", default=None, help="read from FILE instead of stdin")


def _add_geometry(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dx", type=int, default=4)
    parser.add_argument("--dy", type=int, default=4)
    parser.add_argument("--dz", type=int, default=5)
    parser.add_argument("--concurrent", type=int, default=1)
    parser.add_argument("--pitch", type=int, default=2)
    parser.add_argument("--qubit-depth", dest="qubit_depth", type=int, default=2)
    parser.add_argument("--pieces-per-step", dest="pieces_per_step", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qplumb",
        description="Clifford+T preparation and plumbing-piece resource estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a generated circuit")
    p.add_argument("kind", choices=["cnot-ladder", "adder", "random-cliffordt"])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("import", help="import a foreign circuit format")
    p.add_argument("format", choices=["real"])
    _add_io(p)
    p.set_defaults(func=_cmd_import)

    p = sub.add_parser("rewrite", help="exhaustive template optimization")
    p.add_argument("--rules", default="", help=".qrules file (bundled cancellation rules by default)")
    p.add_argument(
        "--objective",
        default="gate_count",
        choices=["gate_count", "t_count", "cnot_count", "weighted"],
    )
    p.add_argument("--budget", type=int, default=100_000)
    _add_io(p)
    p.set_defaults(func=_cmd_rewrite)

    p = sub.add_parser("icm", help="decompose to init/cx/mz/mx")
    p.add_argument("--templates", default="", help="template .qrules file (bundled defaults)")
    p.add_argument("--no-lower", action="store_true", help="skip the ccx lowering prepass")
    _add_io(p)
    p.set_defaults(func=_cmd_icm)

    p = sub.add_parser("schedule", help="time assignment and wire operations")
    p.add_argument("action", choices=["asap", "reorder-first-use", "swap", "recycle"])
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=0)
    _add_io(p)
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("analyze", help="T-gate distribution and availability")
    p.add_argument("action", choices=["t-dist", "availability", "enforce", "report"])
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--capacity", type=int, default=1)
    p.add_argument("--duration", type=int, default=5)
    p.add_argument("--concurrent", type=int, default=1)
    p.add_argument("--cold-start", action="store_true", help="no distilled states before 1+duration")
    p.add_argument(
        "--emit-circuit",
        action="store_true",
        help="availability: print the delay-adjusted circuit instead of the document",
    )
    _add_io(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("layout", help="box scheduling, geometry, resource estimate")
    p.add_argument("action", choices=["build", "estimate"])
    _add_geometry(p)
    _add_io(p)
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("pipeline", help="run a plan file (one stage per line)")
    p.add_argument("--file", required=True)
    _add_io(p)
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("serve", help="run the HTTP service (loopback by default)")
    p.add_argument("--port", type=int, default=8720)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except QPlumbError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
