"""Parametric gate-list generators and the ``.real`` importer.

Generators are deterministic functions of their parameters (the random
generator includes its seed); each one carries a :class:`GeneratorSpec`
describing its parameters so front ends can render forms and run it with
defaults only.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BadParam, MalformedHeader, RealFormatError, UnsupportedGate
from .gatelang import Circuit, Gate, circuit, gate


@dataclass(frozen=True, slots=True)
class ParamSpec:
    name: str
    kind: str  # one of: int, seed, enum, str
    default: str
    choices: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class GeneratorSpec:
    name: str
    params: tuple[ParamSpec, ...]
    description: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
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


def gen_cnot_ladder(n: int) -> Circuit:
    """cx(i, i+1) for i in 0..n-2; the smoke-test generator."""
    if n < 2:
        raise BadParam(f"cnot ladder needs n >= 2, got {n}")
    gates = [gate("cx", i, i + 1) for i in range(n - 1)]
    c = circuit(gates, wire_count=n, name="cnot-ladder")
    return c.with_metadata(generator="cnot-ladder", n=str(n))


def gen_adder(n: int) -> Circuit:
    """In-place ripple-carry adder on 2n+2 wires over {ccx, cx}.

    Wire layout: carry-in (wire 0), then interleaved b_i (1+2i) and
    a_i (2+2i), carry-out last (wire 2n+1).  Computes b <- a + b + cin with
    the carry rippling along the a wires (majority / unmajority cells), so
    no scratch register is needed.  Gate count is 6n + 1.
    """
    if n < 1:
        raise BadParam(f"adder needs n >= 1, got {n}")
    cin = 0
    b = [1 + 2 * i for i in range(n)]
    a = [2 + 2 * i for i in range(n)]
    cout = 2 * n + 1

    def maj(c: int, y: int, x: int) -> list[Gate]:
        return [gate("cx", x, y), gate("cx", x, c), gate("ccx", c, y, x)]

    def uma(c: int, y: int, x: int) -> list[Gate]:
        return [gate("ccx", c, y, x), gate("cx", x, c), gate("cx", c, y)]

    gates: list[Gate] = []
    carries = [cin] + a[:-1]
    for i in range(n):
        gates += maj(carries[i], b[i], a[i])
    gates.append(gate("cx", a[-1], cout))
    for i in reversed(range(n)):
        gates += uma(carries[i], b[i], a[i])
    c = circuit(gates, wire_count=2 * n + 2, name="adder")
    return c.with_metadata(generator="adder", n=str(n))


RANDOM_KINDS = ("h", "s", "t", "cx")


def gen_random_cliffordt(n: int, m: int, seed: int) -> Circuit:
    """m gates drawn uniformly from {h, s, t, cx} on n wires.

    Reproducible per seed (Mersenne Twister, recorded in metadata).  On a
    single wire the two-qubit cx is excluded from the draw.
    """
    if n < 1:
        raise BadParam(f"random circuit needs n >= 1, got {n}")
    if m < 0:
        raise BadParam(f"gate count must be >= 0, got {m}")
    rng = random.Random(seed)
    kinds = RANDOM_KINDS if n >= 2 else tuple(k for k in RANDOM_KINDS if k != "cx")
    gates = []
    for _ in range(m):
        kind = rng.choice(kinds)
        if kind == "cx":
            control, target = rng.sample(range(n), 2)
            gates.append(gate("cx", control, target))
        else:
            gates.append(gate(kind, rng.randrange(n)))
    c = circuit(gates, wire_count=n, name="random-cliffordt")
    return c.with_metadata(
        generator="random-cliffordt",
        prng="python-mt19937",
        n=str(n),
        m=str(m),
        seed=str(seed),
    )


# --- RevKit .real subset importer ---------------------------------------------

_REAL_GATES = {"t1": "x", "t2": "cx", "t3": "ccx"}


def import_real(text: str) -> Circuit:
    """Import the Toffoli-family subset of the ``.real`` format.

    Supported: ``.numvars`` / ``.variables`` headers, ``.begin`` .. ``.end``
    body with ``t1 a``, ``t2 a b``, ``t3 a b c`` lines (controls first,
    target last).  Other gate families (Fredkin, Peres, ...) are rejected
    rather than silently mistranslated.
    """
    numvars: int | None = None
    variables: list[str] = []
    in_body = False
    ended = False
    gates: list[Gate] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("."):
            tokens = line.split()
            directive = tokens[0]
            if directive == ".numvars":
                if len(tokens) != 2 or not tokens[1].isdigit():
                    raise MalformedHeader(f"line {line_no}: bad .numvars")
                numvars = int(tokens[1])
            elif directive == ".variables":
                variables = tokens[1:]
            elif directive == ".begin":
                if numvars is None or not variables:
                    raise MalformedHeader(".begin before .numvars/.variables")
                if len(variables) != numvars:
                    raise MalformedHeader(
                        f".numvars {numvars} but {len(variables)} variables"
                    )
                in_body = True
            elif directive == ".end":
                if not in_body:
                    raise MalformedHeader(".end outside .begin")
                in_body = False
                ended = True
            # other header directives (.version, .inputs, ...) are ignored
            continue
        if not in_body:
            raise MalformedHeader(f"line {line_no}: gate before .begin")
        tokens = line.split()
        kind = _REAL_GATES.get(tokens[0])
        if kind is None:
            raise UnsupportedGate(f"line {line_no}: unsupported gate {tokens[0]!r}")
        expected = int(tokens[0][1])
        wires = tokens[1:]
        if len(wires) != expected:
            raise RealFormatError(
                f"line {line_no}: {tokens[0]} takes {expected} line(s), got {len(wires)}"
            )
        try:
            operands = tuple(variables.index(v) for v in wires)
        except ValueError:
            raise RealFormatError(f"line {line_no}: unknown variable in {line!r}") from None
        gates.append(gate(kind, *operands))

    if not ended:
        raise MalformedHeader("missing .begin/.end body")
    c = circuit(gates, wire_count=len(variables), name="real-import")
    c = Circuit(c.gates, c.wire_count, c.name, tuple(variables), dict(c.metadata))
    return c.with_metadata(importer="revkit-real")


# --- registry ------------------------------------------------------------------

GENERATORS: dict[str, GeneratorSpec] = {
    "cnot-ladder": GeneratorSpec(
        "cnot-ladder",
        (ParamSpec("n", "int", "4"),),
        "Chain of CNOTs cx(i, i+1); smoke-test input",
    ),
    "adder": GeneratorSpec(
        "adder",
        (ParamSpec("n", "int", "4"),),
        "Ripple-carry adder on 2n+2 wires (ccx/cx)",
    ),
    "random-cliffordt": GeneratorSpec(
        "random-cliffordt",
        (
            ParamSpec("n", "int", "8"),
            ParamSpec("m", "int", "100"),
            ParamSpec("seed", "seed", "0"),
        ),
        "Seeded uniform circuit over {h, s, t, cx}",
    ),
}


def run_generator(name: str, **params: int) -> Circuit:
    if name == "cnot-ladder":
        return gen_cnot_ladder(params.get("n", 4))
    if name == "adder":
        return gen_adder(params.get("n", 4))
    if name == "random-cliffordt":
        return gen_random_cliffordt(
            params.get("n", 8), params.get("m", 100), params.get("seed", 0)
        )
    raise BadParam(f"unknown generator {name!r}")
