"""Generators and the .real importer."""
import time
from pathlib import Path

import pytest

from conftest import simulate_classical
from qplumb.errors import BadParam, MalformedHeader, UnsupportedGate
from qplumb.gatelang import circuit_text, metrics, serialize_circuit
from qplumb.generators import (
    gen_adder,
    gen_cnot_ladder,
    gen_random_cliffordt,
    import_real,
)

GOLDEN = Path(__file__).parent / "data" / "adder_n1.qlist"


def test_ladder_minimal():
    c = gen_cnot_ladder(2)
    assert [ln for ln in serialize_circuit(c) if not ln.startswith(".")] == ["cx 0 1|0"]


def test_ladder_n4():
    c = gen_cnot_ladder(4)
    assert len(c) == 3
    assert c.wire_count == 4


def test_ladder_rejects_small_n():
    with pytest.raises(BadParam):
        gen_cnot_ladder(1)


def test_ladder_large_is_fast():
    start = time.monotonic()
    c = gen_cnot_ladder(2000)
    elapsed = time.monotonic() - start
    assert len(c) == 1999
    assert elapsed < 0.1


def test_adder_golden_n1():
    assert circuit_text(gen_adder(1)) == GOLDEN.read_text()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_adder_truth_table(n):
    c = gen_adder(n)
    b_w = [1 + 2 * i for i in range(n)]
    a_w = [2 + 2 * i for i in range(n)]
    for a in range(2**n):
        for b in range(2**n):
            for cin in (0, 1):
                bits = [0] * (2 * n + 2)
                bits[0] = cin
                for i in range(n):
                    bits[a_w[i]] = (a >> i) & 1
                    bits[b_w[i]] = (b >> i) & 1
                out = simulate_classical(c, bits)
                total = a + b + cin
                assert sum(out[b_w[i]] << i for i in range(n)) == total % 2**n
                assert out[2 * n + 1] == total >> n
                assert sum(out[a_w[i]] << i for i in range(n)) == a
                assert out[0] == cin


def test_adder_closed_form_count():
    c = gen_adder(64)
    assert c.wire_count == 130
    assert len(c) == 6 * 64 + 1  # n MAJ + n UMA cells + carry-out CNOT


def test_adder_rejects_n0():
    with pytest.raises(BadParam):
        gen_adder(0)


def test_random_deterministic_per_seed():
    a = gen_random_cliffordt(1, 5, 7)
    b = gen_random_cliffordt(1, 5, 7)
    assert serialize_circuit(a) == serialize_circuit(b)


def test_random_empty():
    c = gen_random_cliffordt(5, 0, 0)
    assert len(c) == 0
    assert c.wire_count == 5


def test_random_metrics_snapshot():
    m1 = metrics(gen_random_cliffordt(16, 500, 1))
    m2 = metrics(gen_random_cliffordt(16, 500, 1))
    assert m1 == m2
    assert m1.gate_count == 500
    assert m1.wire_count == 16


def test_random_single_wire_never_draws_cx():
    c = gen_random_cliffordt(1, 50, 3)
    assert all(g.kind.name != "cx" for g in c)


def test_random_operands_in_range():
    c = gen_random_cliffordt(7, 300, 9)
    assert all(all(w < 7 for w in g.operands) for g in c)


def test_random_rejects_bad_params():
    with pytest.raises(BadParam):
        gen_random_cliffordt(0, 5, 0)
    with pytest.raises(BadParam):
        gen_random_cliffordt(3, -1, 0)


REAL_EXAMPLE = """\
.numvars 2
.variables a b
.begin
t2 a b
.end
"""


def test_real_cnot():
    c = import_real(REAL_EXAMPLE)
    assert [ln for ln in serialize_circuit(c) if not ln.startswith(".")] == ["cx 0 1|0"]


def test_real_not_gate():
    text = ".numvars 1\n.variables a\n.begin\nt1 a\n.end\n"
    c = import_real(text)
    assert [ln for ln in serialize_circuit(c) if not ln.startswith(".")] == ["x 0|0"]


def test_real_toffoli_order():
    text = ".numvars 3\n.variables a b c\n.begin\nt3 a b c\n.end\n"
    c = import_real(text)
    assert c.gates[0].kind.name == "ccx"
    assert c.gates[0].operands == (0, 1, 2)  # controls first, target last


def test_real_unsupported_gate():
    text = ".numvars 2\n.variables a b\n.begin\nf2 a b\n.end\n"
    with pytest.raises(UnsupportedGate):
        import_real(text)


def test_real_missing_header():
    with pytest.raises(MalformedHeader):
        import_real(".begin\nt1 a\n.end\n")


def test_real_missing_body():
    with pytest.raises(MalformedHeader):
        import_real(".numvars 1\n.variables a\n")


def test_real_ignores_extra_headers():
    text = ".version 2.0\n.numvars 2\n.variables a b\n.inputs a b\n.begin\nt2 b a\n.end\n"
    c = import_real(text)
    assert c.gates[0].operands == (1, 0)


def _write_real(c) -> str:
    """Writer for the imported subset; import_real of this is the identity."""
    back = {"x": "t1", "cx": "t2", "ccx": "t3"}
    names = [f"w{i}" for i in range(c.wire_count)]
    lines = [f".numvars {c.wire_count}", ".variables " + " ".join(names), ".begin"]
    for g in c.gates:
        lines.append(back[g.kind.name] + " " + " ".join(names[w] for w in g.operands))
    lines.append(".end")
    return "\n".join(lines) + "\n"


def test_real_import_after_write_is_identity():
    import random

    from qplumb.gatelang import circuit, gate

    rng = random.Random(5)
    gates = []
    for _ in range(40):
        kind = rng.choice(["x", "cx", "ccx"])
        arity = {"x": 1, "cx": 2, "ccx": 3}[kind]
        gates.append(gate(kind, *rng.sample(range(8), arity)))
    c = circuit(gates, wire_count=8)
    again = import_real(_write_real(c))
    assert again.gates == c.gates
    assert again.wire_count == c.wire_count
