"""Parametric circuit generators.

Each generator follows the structure of its block diagram; the reordering and
associativity plugs that diagrams leave implicit are written out with
``rearrange``/``rewire``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .circuit import (
    Circuit,
    assoc_left,
    assoc_right,
    fork2,
    identity,
    join_range,
    loop,
    one,
    rearrange,
    rewire,
    split_range,
)
from .gates import AND, DFF, MUX, NOT, OR, XOR
from .shape import Sum, SumN, Unit, leaf_count, require_equal


def gen_hadd(a="a", b="b", s="s", c="c") -> Circuit:
    """1_a + 1_b -> 1_s + 1_c"""
    return fork2(Sum(Unit(a), Unit(b))) | (XOR(a, b, s) & AND(a, b, c))


def gen_fadd(a="a", b="b", cin="cin", sum="sum", cout="cout") -> Circuit:
    """1_cin + (1_a + 1_b) -> 1_sum + 1_cout, from two half adders and an OR."""
    return (
        (one(Unit(cin)) & gen_hadd(a, b, "s1", "c1"))
        | assoc_left(Unit(cin), Unit("s1"), Unit("c1"))
        | (gen_hadd(cin, "s1", sum, "c2") & one(Unit("c1")))
        | assoc_right(Unit(sum), Unit("c2"), Unit("c1"))
        | (one(Unit(sum)) & OR("c2", "c1", cout))
    )


def gen_hl(x="x", n=1, p=1) -> Circuit:
    """sumn x (n+p) -> sumn x n + sumn x p (low bits first)."""
    return split_range(x, n, p)


def gen_combine(x="x", n=1, p=1) -> Circuit:
    return join_range(x, n, p)


def gen_highlows(a, b, n, p) -> Circuit:
    return gen_hl(a, n, p) & gen_hl(b, n, p)


def gen_combines(a, b, n, p) -> Circuit:
    return gen_combine(a, n, p) & gen_combine(b, n, p)


def gen_ripple(cin="cin", a="a", b="b", cout="cout", sum="sum", n=4) -> Circuit:
    """1_cin + (sumn a n + sumn b n) -> sumn sum n + 1_cout"""
    if n == 0:
        return rewire(
            Sum(Unit(cin), Sum(SumN(Unit(a), 0), SumN(Unit(b), 0))),
            Sum(SumN(Unit(sum), 0), Unit(cout)),
            (0,),
        )
    p = n - 1
    c = one(Unit(cin)) & gen_highlows(a, b, 1, p)
    c = c | rearrange(
        c.output_shape,
        ("ci", ((["a0"], "ah"), (["b0"], "bh"))),
        (("ci", ("a0", "b0")), ("ah", "bh")),
    )
    c = c | (gen_fadd(a, b, cin, sum, "c") & one(Sum(SumN(Unit(a), p), SumN(Unit(b), p))))
    c = c | rearrange(c.output_shape, (("s0", "co"), "rest"), (["s0"], ("co", "rest")))
    c = c | (one(SumN(Unit(sum), 1)) & gen_ripple("c", a, b, cout, sum, p))
    c = c | rearrange(c.output_shape, ("lo", ("hi", "co")), (("lo", "hi"), "co"))
    return c | (gen_combine(sum, 1, p) & one(Unit(cout)))


def gen_map(cell: Circuit, k: int) -> Circuit:
    """k copies of ``cell`` side by side: sumn n k -> sumn m k."""
    n, m = cell.input_shape, cell.output_shape
    if k == 0:
        return rewire(SumN(n, 0), SumN(m, 0), ())
    split = rewire(SumN(n, k), Sum(n, SumN(n, k - 1)), range(k * leaf_count(n)))
    join = rewire(Sum(m, SumN(m, k - 1)), SumN(m, k), range(k * leaf_count(m)))
    return split | (cell & gen_map(cell, k - 1)) | join


def gen_composen(cell: Circuit, k: int) -> Circuit:
    """k copies of a square ``cell`` in series."""
    require_equal(cell.input_shape, cell.output_shape, "composen cell must be n -> n")
    if k == 0:
        return identity(cell.input_shape)
    return cell | gen_composen(cell, k - 1)


def gen_muxn(sel="sel", x="x", y="y", out="out", k=1) -> Circuit:
    """1_sel + (sumn x k + sumn y k) -> sumn out k; out = x if sel else y."""
    src = Sum(Unit(sel), Sum(SumN(Unit(x), k), SumN(Unit(y), k)))
    cell = MUX(sel, x, y, out)
    table = []
    for i in range(k):
        table += [0, 1 + i, 1 + k + i]
    return rewire(src, SumN(cell.input_shape, k), table) | gen_map(cell, k)


def gen_pg() -> Circuit:
    """(1_g + 1_p) + (1_g + 1_p) -> 1_g + 1_p, low half first.

    g = g_hi or (g_lo and p_hi);  p = g_hi or (p_lo and p_hi)
    """
    gp = Sum(Unit("g"), Unit("p"))
    fan = rearrange(
        Sum(gp, gp),
        (("gl", "pl"), ("gh", "ph")),
        (("gh", ("gl", "ph")), ("gh", ("pl", "ph"))),
    )
    g = (one(Unit("g")) & AND("g", "p", "gp")) | OR("g", "gp", "g")
    p = (one(Unit("g")) & AND("p", "p", "pp")) | OR("g", "pp", "p")
    return fan | (g & p)


def gen_fix(k: int) -> Circuit:
    """(1_g + 1_p) + (sumn s h + sumn t h) -> sumn s h + sumn t h with h = 2**(k-1).

    Corrects the high half of both sums using the low half's carries:
    s' = t if g else s,  t' = t if p else s.
    """
    if k < 1:
        raise ValueError("FIX is defined for k >= 1")
    h = 1 << (k - 1)
    fan = rearrange(
        Sum(Sum(Unit("g"), Unit("p")), Sum(SumN(Unit("s"), h), SumN(Unit("t"), h))),
        (("g", "p"), ("s", "t")),
        (("g", ("t", "s")), ("p", ("t", "s"))),
    )
    return fan | (gen_muxn("g", "t", "s", "s", h) & gen_muxn("p", "t", "s", "t", h))


def dc_shapes(k: int, a="a", b="b"):
    w = 1 << k
    return (
        Sum(SumN(Unit(a), w), SumN(Unit(b), w)),
        Sum(Sum(Unit("g"), Unit("p")), Sum(SumN(Unit("s"), w), SumN(Unit("t"), w))),
    )


def gen_dc(k: int, a="a", b="b") -> Circuit:
    """Divide-and-conquer adder on 2**k-bit words: (x, y) -> ((g, p), (s, t))."""
    inp, _ = dc_shapes(k, a, b)
    if k == 0:
        ab = ("a0", "b0")
        c = rearrange(inp, (["a0"], ["b0"]), ((ab, ab), (ab, ab)))
        c = c | (
            (AND(a, b, "g") & OR(a, b, "p"))
            & (XOR(a, b, "s") & (XOR(a, b, "x") | NOT("x", "t")))
        )
        return c | rearrange(c.output_shape, (("g", "p"), ("s", "t")), (("g", "p"), (["s"], ["t"])))
    h = 1 << (k - 1)
    c = gen_highlows(a, b, h, h)
    c = c | rearrange(c.output_shape, (("al", "ah"), ("bl", "bh")), (("al", "bl"), ("ah", "bh")))
    sub = gen_dc(k - 1, a, b)
    c = c | (sub & sub)
    c = c | rearrange(
        c.output_shape,
        ((("gl", "pl"), ("sl", "tl")), (("gh", "ph"), ("sh", "th"))),
        (((("gl", "pl"), ("gh", "ph")), ("sl", "tl")), (("gl", "pl"), ("sh", "th"))),
    )
    half = Sum(SumN(Unit("s"), h), SumN(Unit("t"), h))
    c = c | ((gen_pg() & one(half)) & gen_fix(k))
    c = c | rearrange(c.output_shape, (("gp", ("sl", "tl")), ("sh", "th")), ("gp", (("sl", "sh"), ("tl", "th"))))
    return c | (one(Sum(Unit("g"), Unit("p"))) & (gen_combine("s", h, h) & gen_combine("t", h, h)))


def gen_fifo(x="x", n=1, k=1) -> Circuit:
    """n layers of k parallel DFFs: sumn x k -> sumn x k."""
    return gen_composen(gen_map(DFF(x, x), k), n)


def gen_register(a="a", load="load", out="out") -> Circuit:
    """1_load + 1_a -> 1_out; holds its value unless load is high."""
    body = (
        rearrange(
            Sum(Sum(Unit(load), Unit(a)), Unit(out)), (("l", "a"), "o"), ("l", ("a", "o"))
        )
        | MUX(load, a, out, "in_dff")
        | DFF("in_dff", out)
        | fork2(Unit(out))
    )
    return loop(body)


# ---------------------------------------------------------------------------
# registry used by the CLI and the claim ledger


@dataclass(frozen=True)
class Param:
    name: str
    kind: type
    default: object
    choices: tuple = ()


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    build: Callable
    params: tuple
    doc: str = ""

    def schema(self) -> dict:
        return {p.name: (p.kind.__name__, p.default) for p in self.params}

    def instantiate(self, **raw) -> Circuit:
        known = {p.name: p for p in self.params}
        unknown = set(raw) - set(known)
        if unknown:
            raise ValueError(f"{self.name}: unknown parameter(s) {', '.join(sorted(unknown))}")
        args = {}
        for p in self.params:
            v = raw.get(p.name, p.default)
            if p.kind is int:
                try:
                    v = int(v)
                except (TypeError, ValueError):
                    raise ValueError(f"{self.name}: {p.name} must be an integer, got {v!r}") from None
                if v < 0:
                    raise ValueError(f"{self.name}: {p.name} must be >= 0, got {v}")
            else:
                v = str(v)
                if not v:
                    raise ValueError(f"{self.name}: {p.name} must be non-empty")
            if p.choices and v not in p.choices:
                raise ValueError(f"{self.name}: {p.name} must be one of {', '.join(p.choices)}")
            args[p.name] = v
        return self.build(**args)


def _cell(cell: str, tag: str) -> Circuit:
    return NOT(tag, tag) if cell == "not" else DFF(tag, tag)


def _limit(k, most, what):
    if k > most:
        raise ValueError(f"{what} must be <= {most}")
    return k


def _fix(k):
    if k < 1:
        raise ValueError("fix: k must be >= 1")
    return gen_fix(k)


GENERATORS = {
    g.name: g
    for g in [
        GeneratorSpec("hadd", gen_hadd, (Param("a", str, "a"), Param("b", str, "b"), Param("s", str, "s"), Param("c", str, "c")), "half adder"),
        GeneratorSpec(
            "fadd",
            gen_fadd,
            (Param("a", str, "a"), Param("b", str, "b"), Param("cin", str, "cin"), Param("sum", str, "sum"), Param("cout", str, "cout")),
            "full adder",
        ),
        GeneratorSpec("hl", gen_hl, (Param("x", str, "x"), Param("n", int, 1), Param("p", int, 1)), "split a bus into low and high parts"),
        GeneratorSpec("combine", gen_combine, (Param("x", str, "x"), Param("n", int, 1), Param("p", int, 1)), "join low and high parts"),
        GeneratorSpec(
            "ripple",
            gen_ripple,
            (
                Param("n", int, 4),
                Param("cin", str, "cin"),
                Param("a", str, "a"),
                Param("b", str, "b"),
                Param("cout", str, "cout"),
                Param("sum", str, "sum"),
            ),
            "n-bit ripple-carry adder",
        ),
        GeneratorSpec(
            "muxn",
            gen_muxn,
            (Param("k", int, 1), Param("sel", str, "sel"), Param("x", str, "x"), Param("y", str, "y"), Param("out", str, "out")),
            "k-bit 2-way multiplexer",
        ),
        GeneratorSpec("pg", gen_pg, (), "propagate/generate combiner"),
        GeneratorSpec("fix", _fix, (Param("k", int, 1),), "high-half correction for DC(k)"),
        GeneratorSpec("dc", lambda k, a, b: gen_dc(_limit(k, 10, "dc: k"), a, b), (Param("k", int, 2), Param("a", str, "a"), Param("b", str, "b")), "divide-and-conquer adder on 2^k-bit words"),
        GeneratorSpec("fifo", gen_fifo, (Param("n", int, 1), Param("k", int, 1), Param("x", str, "x")), "n-deep, k-wide DFF buffer"),
        GeneratorSpec("register", gen_register, (Param("a", str, "a"), Param("load", str, "load"), Param("out", str, "out")), "1-bit register"),
        GeneratorSpec(
            "composen",
            lambda cell, k, x: gen_composen(_cell(cell, x), k),
            (Param("cell", str, "not", ("not", "dff")), Param("k", int, 1), Param("x", str, "x")),
            "k copies of a 1-wire cell in series",
        ),
        GeneratorSpec(
            "map",
            lambda cell, k, x: gen_map(_cell(cell, x), k),
            (Param("cell", str, "not", ("not", "dff")), Param("k", int, 1), Param("x", str, "x")),
            "k copies of a 1-wire cell side by side",
        ),
    ]
}


def build(name: str, **params) -> Circuit:
    if name not in GENERATORS:
        raise KeyError(name)
    return GENERATORS[name].instantiate(**params)


def gen_ripple_chain(n: int, m: int, cin="cin", a="a", b="b", cout="cout", sum="sum") -> Circuit:
    """An (n+m)-bit adder made of RIPPLE(n) on the low bits whose carry feeds
    RIPPLE(m) on the high bits. Same interface as ``gen_ripple(n=n+m)``."""
    c = one(Unit(cin)) & gen_highlows(a, b, n, m)
    c = c | rearrange(
        c.output_shape,
        ("ci", (("al", "ah"), ("bl", "bh"))),
        (("ci", ("al", "bl")), ("ah", "bh")),
    )
    c = c | (gen_ripple(cin, a, b, "mid", sum, n) & one(Sum(SumN(Unit(a), m), SumN(Unit(b), m))))
    c = c | rearrange(c.output_shape, (("lo", "mid"), ("ah", "bh")), ("lo", ("mid", ("ah", "bh"))))
    c = c | (one(SumN(Unit(sum), n)) & gen_ripple("mid", a, b, cout, sum, m))
    c = c | rearrange(c.output_shape, ("lo", ("hi", "co")), (("lo", "hi"), "co"))
    return c | (gen_combine(sum, n, m) & one(Unit(cout)))
