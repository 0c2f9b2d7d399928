"""Registry of named correctness claims, one per verified circuit property.

``run_claim("ripple_implements_carry_add", n=4)`` builds the circuit, picks the
codecs and reference function, and returns a :class:`~hdlkernel.verify.CheckReport`.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Optional

from . import generators as G
from . import wordspec as W
from .codec import Word, bit_word_codec, pair_codec, stream_vec_codec, trace_codec, unit_codec, vec_codec, word_codec
from .gates import DFF, NOT, GateKind, gate
from .generators import Param
from .verify import (
    EXHAUSTIVE,
    CheckReport,
    Exhaustive,
    Mode,
    Sampled,
    check_equivalent,
    check_implements,
    check_lift,
    check_nor_equiv,
    check_realise_trace,
)

u = unit_codec


def _pair(a, b):
    return pair_codec(a, b)


# ---------------------------------------------------------------------------
# codecs and reference functions per circuit


def hadd_codecs():
    return _pair(u("a"), u("b")), _pair(u("s"), u("c"))


def hadd_ref(v):
    return W.hadd_fn(*v)


def fadd_bool_codecs():
    return _pair(u("cin"), _pair(u("a"), u("b"))), _pair(u("sum"), u("cout"))


def fadd_bool_ref(v):
    c, (x, y) = v
    return W.fadd_fn(c, x, y)


def fadd_word_codecs():
    return (
        _pair(u("cin"), _pair(bit_word_codec("a"), bit_word_codec("b"))),
        _pair(bit_word_codec("sum"), u("cout")),
    )


def ripple_codecs(n):
    return (
        _pair(u("cin"), _pair(word_codec("a", n), word_codec("b", n))),
        _pair(word_codec("sum", n), u("cout")),
    )


def ripple_ref(n):
    def f(v):
        c, (x, y) = v
        return W.carry_add(n, x, y, c)

    return f


def dc_codecs(k):
    w = 1 << k
    return (
        _pair(word_codec("a", w), word_codec("b", w)),
        _pair(_pair(u("g"), u("p")), _pair(word_codec("s", w), word_codec("t", w))),
    )


def dc_ref(k):
    def f(v):
        g, p, s, t = W.dc_fn(k, *v)
        return ((g, p), (s, t))

    return f


# ---------------------------------------------------------------------------
# claim runners


def _hadd(mode):
    return check_implements(G.gen_hadd(), *hadd_codecs(), hadd_ref, mode)


def _fadd1(mode):
    return check_implements(G.gen_fadd(), *fadd_bool_codecs(), fadd_bool_ref, mode)


def _fadd2(mode):
    return check_implements(G.gen_fadd(), *fadd_word_codecs(), ripple_ref(1), mode)


def _hl(mode, n, p):
    return check_implements(
        G.gen_hl("x", n, p),
        word_codec("x", n + p),
        _pair(word_codec("x", n), word_codec("x", p)),
        lambda x: (W.low(n, p, x), W.high(n, p, x)),
        mode,
    )


def _combine(mode, n, p):
    return check_implements(
        G.gen_combine("x", n, p),
        _pair(word_codec("x", n), word_codec("x", p)),
        word_codec("x", n + p),
        lambda v: W.combine(n, p, *v),
        mode,
    )


def _ripple(mode, n):
    return check_implements(G.gen_ripple(n=n), *ripple_codecs(n), ripple_ref(n), mode)


def _ripple_chain(mode, n, m):
    return check_equivalent(G.gen_ripple(n=n + m), G.gen_ripple_chain(n, m), mode)


def _dc(mode, k):
    return check_implements(G.gen_dc(k), *dc_codecs(k), dc_ref(k), mode)


def _muxn(mode, k):
    return check_implements(
        G.gen_muxn("sel", "x", "y", "out", k),
        _pair(u("sel"), _pair(word_codec("x", k), word_codec("y", k))),
        word_codec("out", k),
        lambda v: v[1][0] if v[0] else v[1][1],
        mode,
    )


def _pg(mode):
    gp = _pair(u("g"), u("p"))

    def f(v):
        (gl, pl), (gh, ph) = v
        return (gh or (gl and ph), gh or (pl and ph))

    return check_implements(G.gen_pg(), _pair(gp, gp), gp, f, mode)


def _composen(mode, k):
    return check_implements(
        G.gen_composen(NOT("x", "x"), k), u("x"), u("x"), lambda v: W.iterate(lambda b: not b, k, v), mode
    )


def _map(mode, k):
    return check_implements(
        G.gen_map(NOT("x", "x"), k),
        vec_codec(u("x"), k),
        vec_codec(u("x"), k),
        lambda v: tuple(not b for b in v),
        mode,
    )


def _fifo(mode, n, k, T):
    return check_realise_trace(
        G.gen_fifo("x", n, k),
        stream_vec_codec("x", k, T),
        stream_vec_codec("x", k, T),
        lambda ins, outs: outs == W.fifo_fn(n, k, ins),
        mode,
    )


def _dff(mode, T):
    return check_realise_trace(
        DFF("a", "out"),
        trace_codec(u("a"), T),
        trace_codec(u("out"), T),
        lambda ins, outs: outs == W.pre_fn(False, ins),
        mode,
    )


def _register(mode, T):
    return check_realise_trace(
        G.gen_register(),
        trace_codec(_pair(u("load"), u("a")), T),
        trace_codec(u("out"), T),
        W.register_relation,
        mode,
    )


def _sampled(mode):
    return mode if isinstance(mode, Sampled) else Sampled(100, 0)


def _lift_hadd(mode, T):
    return check_lift(G.gen_hadd(), hadd_ref, *hadd_codecs(), samples=_sampled(mode), T=T)


def _lift_fadd(mode, T):
    return check_lift(G.gen_fadd(), fadd_bool_ref, *fadd_bool_codecs(), samples=_sampled(mode), T=T)


def _lift_ripple(mode, n, T):
    return check_lift(G.gen_ripple(n=n), ripple_ref(n), *ripple_codecs(n), samples=_sampled(mode), T=T)


def _lift_dc(mode, k, T):
    return check_lift(G.gen_dc(k), dc_ref(k), *dc_codecs(k), samples=_sampled(mode), T=T)


def _nor_gates(mode):
    reports = []
    for kind in GateKind:
        if kind is GateKind.DFF:
            continue
        tags = [f"i{j}" for j in range(kind.arity)] + ["o"]
        reports.append(check_nor_equiv(gate(kind, *tags), mode))
    total = sum(r.total for r in reports)
    failures = [f for r in reports for f in r.failures]
    return CheckReport("nor_equiv_gates", reports[0].mode, total, failures)


def _nor_fadd(mode):
    return check_nor_equiv(G.gen_fadd(), mode)


def _nor_ripple(mode, n):
    return check_nor_equiv(G.gen_ripple(n=n), mode)


def _add_parts(mode, n, m):
    """The (n+m)-bit split-addition identity over every operand and carry."""
    if not isinstance(mode, Exhaustive):
        raise ValueError("add_parts is only checked exhaustively")
    failures = []
    total = 0
    for xl, yl in itertools.product(range(1 << n), repeat=2):
        for xh, yh in itertools.product(range(1 << m), repeat=2):
            for cin in (False, True):
                total += 1
                args = (Word(n, xl), Word(n, yl), Word(m, xh), Word(m, yh), cin)
                if not W.add_parts_holds(n, m, *args):
                    failures.append((args, True, False))
    return CheckReport("add_parts", mode, total, failures)


@dataclass(frozen=True)
class Claim:
    name: str
    label: str
    run: Callable
    params: tuple = ()
    default_mode: Mode = EXHAUSTIVE
    doc: str = ""


_T32 = Param("T", int, 32)
_T64 = Param("T", int, 64)

CLAIMS = {
    c.name: c
    for c in [
        Claim("hadd_implements_hadd", "half adder", _hadd, doc="half adder computes (a xor b, a and b)"),
        Claim("fadd_implements_fadd1", "full adder, boolean", _fadd1, doc="full adder truth table"),
        Claim("fadd_implements_carry_add", "full adder, 1-bit word", _fadd2, doc="full adder is 1-bit carry_add"),
        Claim("hl_implements_split", "bus split", _hl, (Param("n", int, 2), Param("p", int, 2))),
        Claim("combine_implements_combine", "bus join", _combine, (Param("n", int, 2), Param("p", int, 2))),
        Claim("ripple_implements_carry_add", "ripple adder", _ripple, (Param("n", int, 4),)),
        Claim("ripple_chain_equivalent", "chained ripple adders", _ripple_chain, (Param("n", int, 2), Param("m", int, 2))),
        Claim("add_parts", "split addition", _add_parts, (Param("n", int, 2), Param("m", int, 2))),
        Claim("dc_implements_dc", "dc adder", _dc, (Param("k", int, 2),)),
        Claim("muxn_implements_select", "mux", _muxn, (Param("k", int, 2),)),
        Claim("pg_implements_pg", "pg combiner", _pg),
        Claim("composen_iterates", "serial iteration", _composen, (Param("k", int, 3),)),
        Claim("map_implements_map", "parallel map", _map, (Param("k", int, 3),)),
        Claim("dff_implements_pre", "dff delay", _dff, (_T64,), Sampled(200, 0)),
        Claim("fifo_realise", "fifo delay", _fifo, (Param("n", int, 2), Param("k", int, 2), _T32), Sampled(200, 0)),
        Claim("register_realise", "register", _register, (_T64,), Sampled(1000, 0)),
        Claim("lift_hadd", "lift half adder", _lift_hadd, (_T32,), Sampled(100, 0)),
        Claim("lift_fadd", "lift full adder", _lift_fadd, (_T32,), Sampled(100, 0)),
        Claim("lift_ripple", "lift ripple adder", _lift_ripple, (Param("n", int, 2), _T32), Sampled(100, 0)),
        Claim("lift_dc", "lift dc adder", _lift_dc, (Param("k", int, 1), _T32), Sampled(100, 0)),
        Claim("nor_equiv_gates", "nor basis", _nor_gates),
        Claim("nor_equiv_fadd", "nor basis", _nor_fadd),
        Claim("nor_equiv_ripple", "nor basis", _nor_ripple, (Param("n", int, 4),)),
    ]
}


def run_claim(name: str, mode: Optional[Mode] = None, seed: Optional[int] = None, **raw) -> CheckReport:
    claim = CLAIMS[name]
    if mode is None:
        mode = claim.default_mode
    if seed is not None and isinstance(mode, Sampled):
        mode = Sampled(mode.count, seed)
    known = {p.name: p for p in claim.params}
    unknown = set(raw) - set(known)
    if unknown:
        raise ValueError(f"{name}: unknown parameter(s) {', '.join(sorted(unknown))}")
    args = {}
    for p in claim.params:
        v = raw.get(p.name, p.default)
        try:
            v = int(v)
        except (TypeError, ValueError):
            raise ValueError(f"{name}: {p.name} must be an integer, got {v!r}") from None
        if v < 0:
            raise ValueError(f"{name}: {p.name} must be >= 0, got {v}")
        args[p.name] = v
    start = time.perf_counter()
    report = claim.run(mode, **args)
    report.claim = name
    report.seconds = time.perf_counter() - start
    return report
