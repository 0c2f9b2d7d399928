"""Reference functions that circuits are checked against.

Nothing here knows about circuits. Arithmetic uses Python integers so the
oracles cannot overflow; only the stored word values are range-limited.
"""

from __future__ import annotations

from typing import Sequence

from .codec import Trace, Word


def repr_word(n: int, x: int) -> Word:
    """``x mod 2**n`` as an n-bit word (non-negative residue for any integer x)."""
    return Word(n, x % (1 << n))


def low(n: int, p: int, x: Word) -> Word:
    _check(x, n + p)
    return Word(n, x.val % (1 << n))


def high(n: int, p: int, x: Word) -> Word:
    _check(x, n + p)
    return Word(p, x.val >> n)


def combine(n: int, p: int, lo: Word, hi: Word) -> Word:
    _check(lo, n)
    _check(hi, p)
    return Word(n + p, lo.val + (hi.val << n))


def carry_add(n: int, x: Word, y: Word, b: bool) -> tuple:
    """(sum mod 2**n, carry out) of ``x + y + b``."""
    _check(x, n)
    _check(y, n)
    e = x.val + y.val + (1 if b else 0)
    return Word(n, e % (1 << n)), (1 << n) <= e


def hadd_fn(a: bool, b: bool) -> tuple:
    return (a != b, a and b)


def fadd_fn(c: bool, a: bool, b: bool) -> tuple:
    """(sum, carry) of a full adder, written as the two-half-adder formula."""
    return (a != (b != c), (a and b) or (c and (a != b)))


def add_parts_holds(n: int, m: int, xL: Word, yL: Word, xH: Word, yH: Word, cin: bool) -> bool:
    """Adding the low n bits, then the high m bits with the middle carry,
    gives the same result as one (n+m)-bit addition."""
    sum_lo, middle = carry_add(n, xL, yL, cin)
    sum_hi, cout = carry_add(m, xH, yH, middle)
    whole = carry_add(n + m, combine(n, m, xL, xH), combine(n, m, yL, yH), cin)
    return whole == (combine(n, m, sum_lo, sum_hi), cout)


def dc_fn(k: int, x: Word, y: Word) -> tuple:
    """(g, p, s, t) for 2**k-bit operands: s/g without carry in, t/p with."""
    w = 1 << k
    s, g = carry_add(w, x, y, False)
    t, p = carry_add(w, x, y, True)
    return g, p, s, t


def pre_fn(d, tr: Sequence) -> Trace:
    """Delay by one tick, emitting ``d`` first. Length is preserved."""
    samples = tuple(tr)
    if not samples:
        return Trace(())
    return Trace((d,) + samples[:-1])


def fifo_fn(n: int, k: int, tr: Sequence) -> Trace:
    """Sample ``t`` is ``tr[t - n]`` once ``t >= n``; all-false before that."""
    samples = tuple(tr)
    zero = (False,) * k
    return Trace(samples[t - n] if t >= n else zero for t in range(len(samples)))


def register_fn(ins: Sequence) -> Trace:
    """1-bit register over a trace of (load, a): out(0) = false,
    out(t+1) = a(t) if load(t) else out(t)."""
    out = []
    state = False
    for load, a in ins:
        out.append(state)
        if load:
            state = a
    return Trace(out)


def register_relation(ins: Sequence, outs: Sequence) -> bool:
    """``outs = pre false (t -> if load(t) then a(t) else outs(t))`` on a finite prefix."""
    ins, outs = tuple(ins), tuple(outs)
    if len(ins) != len(outs):
        return False
    nxt = [a if load else o for (load, a), o in zip(ins, outs)]
    return outs == tuple(pre_fn(False, nxt))


def iterate(f, k: int, x):
    for _ in range(k):
        x = f(x)
    return x


def _check(x: Word, n: int) -> None:
    if not isinstance(x, Word) or x.width != n:
        raise ValueError(f"expected a {n}-bit word, got {x!r}")
