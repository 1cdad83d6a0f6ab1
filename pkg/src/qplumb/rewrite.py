"""Pattern -> replacement rewriting over circuits.

One engine serves two jobs:

* exhaustive template optimization (breadth-first search over rule
  applications, deduplicated by canonical serialization), and
* lowering Clifford+T circuits to ICM form (init / cx / mz / mx only)
  by expanding each non-ICM gate through its template.

Rules are data, loaded from ``.qrules`` text files::

    rule t_gate
    pattern:
    t w0
    replace:
    cx w0 a0:A
    mx w0
    cx a0 a1:Y
    mz a1
    out: w0->a0
    end

Pattern lines are gate lines over wire variables ``w<i>``.  Replacement
lines may additionally use fresh ancillae ``a<j>``, declared at first
mention with their init state (``a0:A``); the engine inserts the matching
``init`` gate immediately before the ancilla's first use.  The ``out:``
line maps each pattern variable to the variable carrying that logical
wire afterwards (teleportation moves qubits between wires); unlisted
variables map to themselves.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from importlib import resources

from .errors import (
    MissingTemplate,
    RuleFormatError,
    ScheduledInput,
    StaleSite,
)
from .gatelang import (
    ICM_KINDS,
    Circuit,
    Gate,
    Unscheduled,
    make_kind,
    metrics,
    serialize_circuit,
)


@dataclass(frozen=True, slots=True)
class PatternGate:
    """A gate over wire variables instead of concrete wire ids."""

    kind_name: str
    payload: str | None
    variables: tuple[str, ...]
    offset: int = 0


@dataclass(frozen=True)
class RewriteRule:
    name: str
    pattern: tuple[PatternGate, ...]
    replacement: tuple[PatternGate, ...]
    ancilla_states: dict[str, str]  # a-variable -> init state label
    output_map: dict[str, str]  # pattern variable -> carrying variable

    def __post_init__(self) -> None:
        if not self.pattern:
            raise RuleFormatError(f"rule {self.name}: empty pattern")
        pattern_vars = {v for g in self.pattern for v in g.variables}
        for g in self.pattern:
            if any(v.startswith("a") for v in g.variables):
                raise RuleFormatError(f"rule {self.name}: ancilla in pattern")
            if len(set(g.variables)) != len(g.variables):
                raise RuleFormatError(f"rule {self.name}: repeated variable in pattern gate")
        known = pattern_vars | set(self.ancilla_states)
        for g in self.replacement:
            for v in g.variables:
                if v not in known:
                    raise RuleFormatError(f"rule {self.name}: undeclared variable {v}")
            if len(set(g.variables)) != len(g.variables):
                raise RuleFormatError(f"rule {self.name}: repeated variable in replacement gate")
        for v in self.output_map:
            if v not in pattern_vars:
                raise RuleFormatError(f"rule {self.name}: out maps unknown variable {v}")
            if self.output_map[v] not in known:
                raise RuleFormatError(f"rule {self.name}: out targets unknown variable")
        full_map = self.full_output_map()
        targets = list(full_map.values())
        if len(set(targets)) != len(targets):
            raise RuleFormatError(f"rule {self.name}: output map is not injective")

    def full_output_map(self) -> dict[str, str]:
        pattern_vars = sorted({v for g in self.pattern for v in g.variables})
        return {v: self.output_map.get(v, v) for v in pattern_vars}

    @property
    def ancilla_order(self) -> list[str]:
        return sorted(self.ancilla_states, key=lambda a: int(a[1:]))

    def gate_count_delta(self) -> int:
        """Change in gate count per application (inits included)."""
        return len(self.replacement) + len(self.ancilla_states) - len(self.pattern)


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[RewriteRule, ...]
    objective: str = "gate_count"
    weights: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise RuleFormatError("duplicate rule names")
        if self.objective not in OBJECTIVES:
            raise RuleFormatError(f"unknown objective {self.objective!r}")


@dataclass(frozen=True, slots=True)
class MatchSite:
    rule_name: str
    binding: tuple[tuple[str, int], ...]  # variable -> wire, sorted by variable
    indices: tuple[int, ...]

    def binding_dict(self) -> dict[str, int]:
        return dict(self.binding)


def objective_value(c: Circuit, objective: str, weights: dict[str, float] | None = None) -> float:
    return OBJECTIVES[objective](c, weights or {})


OBJECTIVES = {
    "gate_count": lambda c, w: float(len(c.gates)),
    "t_count": lambda c, w: float(metrics(c).t_count),
    "cnot_count": lambda c, w: float(metrics(c).cnot_count),
    "weighted": lambda c, w: sum(w.get(g.kind.name, 1.0) for g in c.gates),
}


# --- rule file parsing ---------------------------------------------------------

_VAR_RE = re.compile(r"^[wa]\d+$")
_ANCILLA_DECL_RE = re.compile(r"^(a\d+):(\S+)$")


def _parse_rule_gate(
    line: str, rule_name: str, allow_ancillae: bool, states: dict[str, str]
) -> PatternGate:
    offset = 0
    body = line
    if "|" in line:
        body, _, offset_part = line.rpartition("|")
        try:
            offset = int(offset_part.strip())
        except ValueError:
            raise RuleFormatError(f"rule {rule_name}: bad offset in {line!r}") from None
    tokens = body.split()
    if not tokens:
        raise RuleFormatError(f"rule {rule_name}: empty gate line")
    kind_name = tokens[0]
    payload: str | None = None
    variables: list[str] = []
    for pos, tok in enumerate(tokens[1:]):
        decl = _ANCILLA_DECL_RE.match(tok)
        if decl:
            if not allow_ancillae:
                raise RuleFormatError(f"rule {rule_name}: ancilla {tok} in pattern")
            var, state = decl.group(1), decl.group(2)
            if states.get(var, state) != state:
                raise RuleFormatError(f"rule {rule_name}: {var} declared with two states")
            states[var] = state
            variables.append(var)
        elif _VAR_RE.match(tok):
            if tok.startswith("a") and not allow_ancillae:
                raise RuleFormatError(f"rule {rule_name}: ancilla {tok} in pattern")
            variables.append(tok)
        elif kind_name == "init" and pos == 1:
            payload = tok
        else:
            raise RuleFormatError(f"rule {rule_name}: bad token {tok!r} in {line!r}")
    return PatternGate(kind_name, payload, tuple(variables), offset)


def parse_rules(text: str) -> list[RewriteRule]:
    """Parse ``.qrules`` text into rules (see module docstring for format)."""
    rules: list[RewriteRule] = []
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    i = 0
    n = len(lines)
    while i < n:
        if not lines[i]:
            i += 1
            continue
        if not lines[i].startswith("rule "):
            raise RuleFormatError(f"expected 'rule NAME', got {lines[i]!r}")
        name = lines[i][5:].strip()
        i += 1
        section = None
        pattern: list[PatternGate] = []
        replacement: list[PatternGate] = []
        states: dict[str, str] = {}
        out_map: dict[str, str] = {}
        while i < n and lines[i] != "end":
            line = lines[i]
            i += 1
            if not line:
                continue
            if line == "pattern:":
                section = "pattern"
            elif line == "replace:":
                section = "replace"
            elif line.startswith("out:"):
                for pair in line[4:].split():
                    if "->" not in pair:
                        raise RuleFormatError(f"rule {name}: bad out entry {pair!r}")
                    src, dst = pair.split("->", 1)
                    out_map[src] = dst
            elif section == "pattern":
                pattern.append(_parse_rule_gate(line, name, False, states))
            elif section == "replace":
                replacement.append(_parse_rule_gate(line, name, True, states))
            else:
                raise RuleFormatError(f"rule {name}: line outside a section: {line!r}")
        if i >= n:
            raise RuleFormatError(f"rule {name}: missing 'end'")
        i += 1
        rules.append(RewriteRule(name, tuple(pattern), tuple(replacement), states, out_map))
    return rules


def load_rules_file(path: str) -> list[RewriteRule]:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read())


def load_bundled_rules(resource_name: str) -> list[RewriteRule]:
    text = resources.files("qplumb.rules").joinpath(resource_name).read_text("utf-8")
    return parse_rules(text)


def default_icm_templates() -> RuleSet:
    """The shipped Clifford+T -> ICM template set (t/tdg/s/sdg/h + Paulis)."""
    rules = load_bundled_rules("icm_default.qrules")
    rs = RuleSet(tuple(rules))
    validate_decomposition_templates(rs)
    return rs


def toffoli_lowering() -> RuleSet:
    """ccx -> {h, t, tdg, cx} expansion used before ICM decomposition."""
    return RuleSet(tuple(load_bundled_rules("toffoli_lower.qrules")))


def example_cancellation() -> RuleSet:
    return RuleSet(tuple(load_bundled_rules("example_cancel.qrules")))


def validate_decomposition_templates(rs: RuleSet) -> None:
    """Reject template sets that could loop during decomposition.

    Every template must be a single-gate pattern whose replacement has
    strictly fewer non-ICM gates than the pattern, so each application
    reduces the non-ICM gate count and the rewrite terminates.
    """
    seen_kinds: set[str] = set()
    for rule in rs.rules:
        if len(rule.pattern) != 1:
            raise RuleFormatError(
                f"template {rule.name}: decomposition templates match a single gate"
            )
        kind = rule.pattern[0].kind_name
        if kind in seen_kinds:
            raise RuleFormatError(f"two templates for kind {kind!r}")
        seen_kinds.add(kind)
        pattern_non_icm = sum(1 for g in rule.pattern if g.kind_name not in ICM_KINDS)
        repl_non_icm = sum(1 for g in rule.replacement if g.kind_name not in ICM_KINDS)
        if repl_non_icm >= pattern_non_icm:
            raise RuleFormatError(
                f"template {rule.name}: replacement does not reduce non-ICM gates"
            )


# --- matching ------------------------------------------------------------------

def _try_bind(
    pg: PatternGate, g: Gate, binding: dict[str, int], bound_wires: set[int]
) -> dict[str, int] | None:
    if g.kind.name != pg.kind_name or g.kind.tag_payload != pg.payload:
        return None
    if len(g.operands) != len(pg.variables):
        return None
    if g.is_scheduled or g.offset != pg.offset:
        return None
    new = dict(binding)
    new_wires = set(bound_wires)
    for var, wire in zip(pg.variables, g.operands):
        bound = new.get(var)
        if bound is None:
            if wire in new_wires:
                return None  # injectivity
            new[var] = wire
            new_wires.add(wire)
        elif bound != wire:
            return None
    return new


def _interposer_free(c: Circuit, indices: tuple[int, ...], wires: set[int]) -> bool:
    matched = set(indices)
    for idx in range(indices[0] + 1, indices[-1]):
        if idx in matched:
            continue
        if any(w in wires for w in c.gates[idx].operands):
            return False
    return True


def find_matches(c: Circuit, rule: RewriteRule) -> list[MatchSite]:
    """All sites where `rule.pattern` matches `c`.

    A site is valid when the matched gates appear in program order and no
    unmatched gate touching a bound wire sits between them, i.e. the
    matched gates are consecutive in the wire-local dependency order.
    Sites are returned in ascending first-gate-index order (then
    lexicographically by the remaining indices).
    """
    if not c.is_unscheduled:
        raise ScheduledInput("matching operates on unscheduled circuits")
    sites: list[MatchSite] = []
    gates = c.gates
    pattern = rule.pattern

    def extend(pi: int, start: int, binding: dict[str, int], indices: tuple[int, ...]) -> None:
        if pi == len(pattern):
            wires = set(binding.values())
            if _interposer_free(c, indices, wires):
                sites.append(
                    MatchSite(rule.name, tuple(sorted(binding.items())), indices)
                )
            return
        for j in range(start, len(gates)):
            new = _try_bind(pattern[pi], gates[j], binding, set(binding.values()))
            if new is not None:
                extend(pi + 1, j + 1, new, indices + (j,))

    extend(0, 0, {}, ())
    return sites


def _site_still_valid(c: Circuit, rule: RewriteRule, site: MatchSite) -> bool:
    if len(site.indices) != len(rule.pattern):
        return False
    if any(i >= len(c.gates) for i in site.indices):
        return False
    binding = site.binding_dict()
    for pg, idx in zip(rule.pattern, site.indices):
        g = c.gates[idx]
        if g.kind.name != pg.kind_name or g.kind.tag_payload != pg.payload:
            return False
        if g.is_scheduled or g.offset != pg.offset:
            return False
        if tuple(binding.get(v) for v in pg.variables) != g.operands:
            return False
    return _interposer_free(c, site.indices, set(binding.values()))


def _instantiate_block(
    rule: RewriteRule, binding: dict[str, int], first_ancilla: int
) -> tuple[list[Gate], dict[str, int]]:
    """Replacement gates with variables substituted and inits injected.

    Each fresh ancilla's ``init`` gate is inserted immediately before the
    first replacement gate that uses it.
    """
    resolve = dict(binding)
    for offset_id, a_var in enumerate(rule.ancilla_order):
        resolve[a_var] = first_ancilla + offset_id
    block: list[Gate] = []
    initialised: set[str] = set()
    for pg in rule.replacement:
        for var in pg.variables:
            if var in rule.ancilla_states and var not in initialised:
                initialised.add(var)
                block.append(
                    Gate(
                        make_kind("init", 1, rule.ancilla_states[var]),
                        (resolve[var],),
                        Unscheduled(0),
                    )
                )
        kind = make_kind(pg.kind_name, len(pg.variables), pg.payload)
        block.append(
            Gate(kind, tuple(resolve[v] for v in pg.variables), Unscheduled(pg.offset))
        )
    # ancillae that are declared but never used still get their init
    for var in rule.ancilla_order:
        if var not in initialised:
            block.append(
                Gate(make_kind("init", 1, rule.ancilla_states[var]), (resolve[var],), Unscheduled(0))
            )
    return block, resolve


def apply_rule(c: Circuit, rule: RewriteRule, site: MatchSite) -> Circuit:
    """Replace one match site; fresh ancillae become new trailing wires.

    Subsequent gates that reference a remapped logical wire (per the
    rule's output map) are rewired onto the carrying wire.
    """
    if not _site_still_valid(c, rule, site):
        raise StaleSite(f"site for rule {rule.name} no longer matches")
    binding = site.binding_dict()
    block, resolve = _instantiate_block(rule, binding, c.wire_count)

    remap: dict[int, int] = {}
    for src_var, dst_var in rule.full_output_map().items():
        src_wire = binding[src_var]
        dst_wire = resolve[dst_var]
        if src_wire != dst_wire:
            remap[src_wire] = dst_wire

    matched = set(site.indices)
    first = site.indices[0]
    out: list[Gate] = list(c.gates[:first])
    out.extend(block)
    for idx in range(first + 1, len(c.gates)):
        if idx in matched:
            continue
        g = c.gates[idx]
        if remap and any(w in remap for w in g.operands):
            g = g.with_operands(tuple(remap.get(w, w) for w in g.operands))
        out.append(g)
    return c.replace_gates(out, wire_count=c.wire_count + len(rule.ancilla_states))


# --- exhaustive search -----------------------------------------------------------

@dataclass(frozen=True)
class SearchReport:
    initial_objective: float
    best_objective: float
    nodes_expanded: int
    nodes_discovered: int
    budget_exhausted: bool
    path: tuple[str, ...]  # rule names applied to reach the winner

    def to_dict(self) -> dict:
        return {
            "initial_objective": self.initial_objective,
            "best_objective": self.best_objective,
            "nodes_expanded": self.nodes_expanded,
            "nodes_discovered": self.nodes_discovered,
            "budget_exhausted": self.budget_exhausted,
            "path": list(self.path),
        }


def _canon(c: Circuit) -> str:
    return "\n".join(serialize_circuit(c))


def exhaustive_optimize(
    c: Circuit, rs: RuleSet, budget: int = 100_000
) -> tuple[Circuit, SearchReport]:
    """Breadth-first search over rule applications.

    Deduplicates reachable circuits by canonical serialization and stops
    after `budget` node expansions or exhaustion.  Returns the best
    circuit under the rule set's objective; ties break toward earlier
    discovery, so the input wins when nothing improves on it.
    """
    if not c.is_unscheduled:
        raise ScheduledInput("optimization operates on unscheduled circuits")
    start_key = _canon(c)
    obj = lambda circ: objective_value(circ, rs.objective, rs.weights)
    parents: dict[str, tuple[str, str] | None] = {start_key: None}
    best_key, best_value, best_circuit = start_key, obj(c), c
    queue: deque[Circuit] = deque([c])
    discovered = 1
    expanded = 0
    while queue and expanded < budget:
        node = queue.popleft()
        expanded += 1
        node_key = _canon(node)
        for rule in rs.rules:
            for site in find_matches(node, rule):
                child = apply_rule(node, rule, site)
                key = _canon(child)
                if key in parents:
                    continue
                parents[key] = (node_key, rule.name)
                discovered += 1
                value = obj(child)
                if value < best_value:
                    best_key, best_value, best_circuit = key, value, child
                queue.append(child)
    path: list[str] = []
    cursor = best_key
    while parents[cursor] is not None:
        cursor, rule_name = parents[cursor]  # type: ignore[misc]
        path.append(rule_name)
    report = SearchReport(
        initial_objective=obj(c),
        best_objective=best_value,
        nodes_expanded=expanded,
        nodes_discovered=discovered,
        budget_exhausted=bool(queue),
        path=tuple(reversed(path)),
    )
    return best_circuit, report


# --- ICM decomposition ------------------------------------------------------------

def decompose_to_icm(c: Circuit, templates: RuleSet | None = None) -> Circuit:
    """Expand every non-ICM gate until the alphabet is {init, cx, mz, mx}.

    Equivalent to repeated leftmost template application; implemented as
    linear passes with a running wire remap so 10^5-gate circuits expand
    in one scan.  The original-wire -> final-wire map lands in metadata
    under ``icm_wire_map``.
    """
    if templates is None:
        templates = default_icm_templates()
    validate_decomposition_templates(templates)
    by_kind = {rule.pattern[0].kind_name: rule for rule in templates.rules}

    next_wire = c.wire_count
    gates = c.gates
    ancillae_added = 0
    global_map: dict[int, int] = {}  # original wire -> final carrier

    changed = True
    while changed:
        changed = False
        out: list[Gate] = []
        # remap state for this pass only: a move applies to the gates that
        # follow the expansion point, not to the whole stream
        forward: dict[int, int] = {}
        reverse: dict[int, int] = {}
        for g in gates:
            ops = g.operands
            if forward and any(w in forward for w in ops):
                ops = tuple(forward.get(w, w) for w in ops)
                g = g.with_operands(ops)
            kind = g.kind.name
            if kind in ICM_KINDS:
                out.append(g)
                continue
            rule = by_kind.get(kind)
            if rule is None:
                raise MissingTemplate(f"no template for gate kind {kind!r}")
            pg = rule.pattern[0]
            if len(pg.variables) != len(ops) or pg.payload != g.kind.tag_payload:
                raise MissingTemplate(
                    f"template {rule.name} does not fit {kind} with {len(ops)} wires"
                )
            changed = True
            binding = dict(zip(pg.variables, ops))
            block, resolve = _instantiate_block(rule, binding, next_wire)
            next_wire += len(rule.ancilla_states)
            ancillae_added += len(rule.ancilla_states)
            out.extend(block)
            for src_var, dst_var in rule.full_output_map().items():
                src_wire = binding[src_var]
                dst_wire = resolve[dst_var]
                if src_wire == dst_wire:
                    continue
                origin = reverse.pop(src_wire, src_wire)
                forward[origin] = dst_wire
                reverse[dst_wire] = origin
        gates = tuple(out)
        if forward:
            carriers = {w: global_map.get(w, w) for w in range(c.wire_count)}
            for origin, carrier in carriers.items():
                if carrier in forward:
                    global_map[origin] = forward[carrier]

    wire_map = ",".join(
        f"{w}:{global_map[w]}" for w in range(c.wire_count) if w in global_map
    )
    result = c.replace_gates(gates, wire_count=next_wire)
    return result.with_metadata(
        icm_wire_map=wire_map, icm_ancilla_count=str(ancillae_added)
    )


def lower_gates(c: Circuit, rs: RuleSet) -> Circuit:
    """Expand gates through single-gate rules until none of their kinds remain.

    Used to lower ccx to Clifford+T before ICM decomposition.  Unlike ICM
    templates the replacements may contain arbitrary gates, as long as no
    replacement reintroduces a kind the set expands.
    """
    by_kind: dict[str, RewriteRule] = {}
    for rule in rs.rules:
        if len(rule.pattern) != 1:
            continue
        kind = rule.pattern[0].kind_name
        if any(g.kind_name in {r.pattern[0].kind_name for r in rs.rules if len(r.pattern) == 1}
               for g in rule.replacement):
            raise RuleFormatError(f"lowering rule {rule.name} reintroduces a lowered kind")
        by_kind[kind] = rule

    next_wire = c.wire_count
    out: list[Gate] = []
    expanded = False
    for g in c.gates:
        rule = by_kind.get(g.kind.name)
        if rule is None:
            out.append(g)
            continue
        pg = rule.pattern[0]
        if len(pg.variables) != len(g.operands):
            out.append(g)
            continue
        expanded = True
        binding = dict(zip(pg.variables, g.operands))
        block, _ = _instantiate_block(rule, binding, next_wire)
        next_wire += len(rule.ancilla_states)
        out.extend(block)
    if not expanded:
        return c
    return c.replace_gates(out, wire_count=next_wire)
