import numpy as np
import pytest

from hdlkernel import generators as G
from hdlkernel.analyses import critical_path, gate_count
from hdlkernel.circuit import plug_map_of
from hdlkernel.claims import run_claim
from hdlkernel.gates import NOT, GateKind
from hdlkernel.semantics import elaborate, eval_many, sim_many
from hdlkernel.shape import Sum, SumN, Unit, identity_map
from hdlkernel.verify import check_equivalent

XOR, AND, OR, MUX, DFF = GateKind.XOR, GateKind.AND, GateKind.OR, GateKind.MUX, GateKind.DFF


def test_hadd():
    c = G.gen_hadd()
    assert c.input_shape == Sum(Unit("a"), Unit("b"))
    assert c.output_shape == Sum(Unit("s"), Unit("c"))
    assert gate_count(c) == {XOR: 1, AND: 1}
    assert critical_path(c) == 1
    assert run_claim("hadd_implements_hadd").verdict


def test_fadd():
    c = G.gen_fadd()
    assert gate_count(c) == {XOR: 2, AND: 2, OR: 1}
    assert critical_path(c) == 3
    assert run_claim("fadd_implements_fadd1").total == 8
    assert run_claim("fadd_implements_carry_add").verdict


@pytest.mark.parametrize("n,p", [(0, 3), (2, 2), (3, 5), (1, 0)])
def test_hl_combine(n, p):
    assert plug_map_of(G.gen_hl("x", n, p) | G.gen_combine("x", n, p)) == identity_map(SumN(Unit("x"), n + p))
    assert run_claim("hl_implements_split", n=n, p=p).verdict
    assert run_claim("combine_implements_combine", n=n, p=p).verdict


def test_ripple_interface():
    c = G.gen_ripple(n=3)
    a3, b3 = SumN(Unit("a"), 3), SumN(Unit("b"), 3)
    assert c.input_shape == Sum(Unit("cin"), Sum(a3, b3))
    assert c.output_shape == Sum(SumN(Unit("sum"), 3), Unit("cout"))


def test_ripple_zero_is_plug():
    c = G.gen_ripple(n=0)
    assert gate_count(c) == {}
    out = eval_many(c, np.array([[0], [1]], dtype=np.uint8))
    assert out.tolist() == [[0], [1]]


def test_ripple_one_equals_fadd():
    r = G.gen_ripple(n=1)
    f = G.gen_fadd()
    rows = np.array([[(v >> i) & 1 for i in range(3)] for v in range(8)], dtype=np.uint8)
    assert (eval_many(r, rows) == eval_many(f, rows)).all()


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_ripple_implements_carry_add(n):
    r = run_claim("ripple_implements_carry_add", n=n)
    assert r.verdict and r.total == 2 ** (2 * n + 1)


def test_ripple_gate_recurrence():
    fadd = gate_count(G.gen_fadd())
    for n in range(1, 9):
        prev, cur = gate_count(G.gen_ripple(n=n - 1)), gate_count(G.gen_ripple(n=n))
        for k in set(prev) | set(cur) | set(fadd):
            assert cur.get(k, 0) - prev.get(k, 0) == fadd.get(k, 0)


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (1, 3), (3, 3), (0, 2)])
def test_ripple_chain_equivalence(n, m):
    assert check_equivalent(G.gen_ripple(n=n + m), G.gen_ripple_chain(n, m)).verdict


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_muxn(k):
    c = G.gen_muxn(k=k)
    assert gate_count(c) == {MUX: k}
    assert run_claim("muxn_implements_select", k=k).verdict


def test_pg_and_fix():
    assert run_claim("pg_implements_pg").verdict
    f = G.gen_fix(2)
    assert gate_count(f) == {MUX: 4}
    with pytest.raises(ValueError):
        G.GENERATORS["fix"].instantiate(k=0)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_dc(k):
    r = run_claim("dc_implements_dc", k=k)
    assert r.verdict and r.total == 2 ** (2 << k)


def test_dc_depth_increments():
    depths = [critical_path(G.gen_dc(k)) for k in range(0, 6)]
    steps = [b - a for a, b in zip(depths, depths[1:])]
    assert len(set(steps[1:])) == 1


def test_composen():
    assert plug_map_of(G.gen_composen(NOT("x", "x"), 0)) == identity_map(Unit("x"))
    for k in range(6):
        assert run_claim("composen_iterates", k=k).verdict


def test_map():
    for k in range(5):
        assert run_claim("map_implements_map", k=k).verdict
    assert gate_count(G.gen_map(NOT("x", "x"), 3)) == {GateKind.NOT: 3}


def test_fifo_structure():
    assert G.gen_fifo("x", 1, 1).input_shape == SumN(Unit("x"), 1)
    for n in range(1, 4):
        for k in range(1, 4):
            assert gate_count(G.gen_fifo("x", n, k)) == {DFF: n * k}
            assert critical_path(G.gen_fifo("x", n, k)) == 0


def test_fifo_1_1_is_a_dff():
    rng = np.random.default_rng(3)
    ins = rng.integers(0, 2, size=(20, 1, 5), dtype=np.uint8)
    d = G.DFF("x", "x")
    assert (sim_many(G.gen_fifo("x", 1, 1), ins) == sim_many(d, ins)).all()


def test_fifo_realise():
    assert run_claim("fifo_realise", n=3, k=2).verdict


def test_register():
    nl = elaborate(G.gen_register())
    assert gate_count(nl) == {MUX: 1, DFF: 1}
    assert run_claim("register_realise", T=64).verdict


def test_register_with_load_is_fifo1():
    rng = np.random.default_rng(5)
    T = 24
    a = rng.integers(0, 2, size=(T, 1, 8), dtype=np.uint8)
    ins = np.concatenate([np.ones_like(a), a], axis=1)
    assert (sim_many(G.gen_register(), ins) == sim_many(G.gen_fifo("a", 1, 1), a)).all()


def test_registry_validation():
    with pytest.raises(ValueError):
        G.build("ripple", n=-1)
    with pytest.raises(ValueError):
        G.build("ripple", width=3)
    with pytest.raises(ValueError):
        G.build("map", cell="xor")
    with pytest.raises(KeyError):
        G.build("nope")
    assert G.GENERATORS["ripple"].schema()["n"] == ("int", 4)


def test_every_generator_builds_with_defaults():
    for name, spec in G.GENERATORS.items():
        c = spec.instantiate()
        elaborate(c)


def test_custom_tags():
    c = G.gen_ripple("ci", "x", "y", "co", "s", 2)
    assert c.input_shape == Sum(Unit("ci"), Sum(SumN(Unit("x"), 2), SumN(Unit("y"), 2)))
    assert c.output_shape == Sum(SumN(Unit("s"), 2), Unit("co"))
