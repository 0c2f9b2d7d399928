"""Invertible translations between wire bundles and structured values.

Structured values use plain Python where it fits: a single wire decodes to a
``bool``, a binary sum to a 2-tuple and an n-ary sum to a k-tuple. Words and
traces get their own small classes because they carry invariants (range,
uniform length).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterator

import numpy as np

from .errors import LengthMismatch
from .shape import Bundle, Shape, Sum, SumN, Unit, leaf_count


@dataclass(frozen=True, order=True)
class Word:
    """An unsigned ``width``-bit integer, ``0 <= val < 2**width``."""

    width: int
    val: int

    def __post_init__(self):
        if self.width < 0:
            raise ValueError(f"negative word width {self.width}")
        if not 0 <= self.val < (1 << self.width):
            raise ValueError(f"{self.val} out of range for a {self.width}-bit word")

    def __int__(self):
        return self.val

    def __repr__(self):
        return f"Word({self.width}, {self.val})"


@dataclass(frozen=True)
class Trace:
    """A finite prefix of a stream: one sample per clock tick."""

    samples: tuple

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    @property
    def length(self) -> int:
        return len(self.samples)

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, t):
        return self.samples[t]

    def __iter__(self):
        return iter(self.samples)


class Codec:
    """Bijection between bundles over ``shape`` and a set of values.

    Subclasses implement ``_decode``/``_encode`` on the flat tuple of leaf
    values in canonical order.
    """

    shape: Shape

    def decode(self, b: Bundle) -> Any:
        if b.shape != self.shape:
            from .shape import require_equal

            require_equal(self.shape, b.shape, f"{type(self).__name__}.decode")
        return self._decode(b.values)

    def encode(self, v: Any) -> Bundle:
        return Bundle(self.shape, self._encode(v))

    def decode_values(self, vals) -> Any:
        """Decode from the flat leaf values directly, skipping the Bundle."""
        return self._decode(tuple(vals))

    def encode_values(self, v: Any) -> tuple:
        return self._encode(v)

    @property
    def width(self) -> int:
        return leaf_count(self.shape)

    @property
    def cardinality(self) -> int:
        return 2**self.width

    def domain(self) -> Iterator[Any]:
        """Every value of the codec's (boolean) domain, in bit-counting order."""
        for bits in itertools.product((False, True), repeat=self.width):
            yield self._decode(bits[::-1])

    def _decode(self, vals: tuple) -> Any:
        raise NotImplementedError

    def _encode(self, v: Any) -> tuple:
        raise NotImplementedError


class UnitCodec(Codec):
    def __init__(self, tag: str):
        self.tag = tag
        self.shape = Unit(tag)

    def _decode(self, vals):
        return bool(vals[0])

    def _encode(self, v):
        if not isinstance(v, (bool, np.bool_)) and v not in (0, 1):
            raise TypeError(f"wire {self.tag!r} carries a bit, got {v!r}")
        return (bool(v),)

    def domain(self):
        return iter((False, True))

    def __repr__(self):
        return f"ι_{self.tag}"


class PairCodec(Codec):
    def __init__(self, first: Codec, second: Codec):
        self.first = first
        self.second = second
        self.shape = Sum(first.shape, second.shape)
        self._split = leaf_count(first.shape)

    def _decode(self, vals):
        k = self._split
        return (self.first._decode(vals[:k]), self.second._decode(vals[k:]))

    def _encode(self, v):
        x, y = v
        return self.first._encode(x) + self.second._encode(y)

    def domain(self):
        for x in self.first.domain():
            for y in self.second.domain():
                yield (x, y)

    @property
    def cardinality(self):
        return self.first.cardinality * self.second.cardinality

    def __repr__(self):
        return f"({self.first!r} • {self.second!r})"


class VecCodec(Codec):
    def __init__(self, elem: Codec, k: int):
        self.elem = elem
        self.k = k
        self.shape = SumN(elem.shape, k)
        self._step = leaf_count(elem.shape)

    def _decode(self, vals):
        w = self._step
        return tuple(self.elem._decode(vals[i * w:(i + 1) * w]) for i in range(self.k))

    def _encode(self, v):
        if len(v) != self.k:
            raise LengthMismatch(f"vector of length {self.k} expected, got {len(v)}")
        out = ()
        for x in v:
            out += self.elem._encode(x)
        return out

    def domain(self):
        return itertools.product(*(list(self.elem.domain()) for _ in range(self.k)))

    @property
    def cardinality(self):
        return self.elem.cardinality**self.k

    def __repr__(self):
        return f"vec({self.elem!r}, {self.k})"


class WordCodec(Codec):
    """Leaf ``At(0)`` is the least significant bit."""

    def __init__(self, tag: str, n: int):
        self.tag = tag
        self.n = n
        self.shape = SumN(Unit(tag), n)

    def _decode(self, vals):
        v = 0
        for i, bit in enumerate(vals):
            if bit:
                v |= 1 << i
        return Word(self.n, v)

    def _encode(self, v):
        if not isinstance(v, Word) or v.width != self.n:
            raise TypeError(f"Φ_{self.tag}^{self.n} encodes Word({self.n}, _), got {v!r}")
        return tuple(bool((v.val >> i) & 1) for i in range(self.n))

    def domain(self):
        return (Word(self.n, v) for v in range(1 << self.n))

    def __repr__(self):
        return f"Φ_{self.tag}^{self.n}"


class BitWordCodec(Codec):
    """A single wire read as a 1-bit word."""

    def __init__(self, tag: str):
        self.tag = tag
        self.shape = Unit(tag)

    def _decode(self, vals):
        return Word(1, int(bool(vals[0])))

    def _encode(self, v):
        if not isinstance(v, Word) or v.width != 1:
            raise TypeError(f"wire {self.tag!r} encodes Word(1, _), got {v!r}")
        return (bool(v.val),)

    def domain(self):
        return iter((Word(1, 0), Word(1, 1)))

    def __repr__(self):
        return f"Φ_{self.tag}^1'"


class BitsCodec(Codec):
    """Raw codec: a bundle decodes to the tuple of its bits in canonical order."""

    def __init__(self, shape: Shape):
        self.shape = shape

    def _decode(self, vals):
        return tuple(bool(v) for v in vals)

    def _encode(self, v):
        if len(v) != self.width:
            raise LengthMismatch(f"{self.width} bits expected, got {len(v)}")
        return tuple(bool(x) for x in v)

    def __repr__(self):
        return f"bits({self.shape})"


class TraceCodec(Codec):
    """Lifts a boolean codec to bundles whose wires carry length-``T`` traces.

    Decoding transposes wire-major data to time-major: the result is a
    :class:`Trace` whose sample ``t`` is ``inner`` decoding the tick-``t`` bits.
    """

    def __init__(self, inner: Codec, T: int):
        self.inner = inner
        self.T = T
        self.shape = inner.shape

    def _decode(self, vals):
        for tr in vals:
            if len(tr) != self.T:
                raise LengthMismatch(f"trace of length {len(tr)}, expected {self.T}")
        return Trace(
            self.inner._decode(tuple(bool(tr[t]) for tr in vals)) for t in range(self.T)
        )

    def _encode(self, v):
        samples = v.samples if isinstance(v, Trace) else tuple(v)
        if len(samples) != self.T:
            raise LengthMismatch(f"trace of length {len(samples)}, expected {self.T}")
        per_tick = [self.inner._encode(s) for s in samples]
        return tuple(tuple(tick[w] for tick in per_tick) for w in range(self.width))

    @property
    def cardinality(self):
        return self.inner.cardinality**self.T

    def domain(self):
        return (Trace(s) for s in itertools.product(list(self.inner.domain()), repeat=self.T))

    def __repr__(self):
        return f"stream({self.inner!r}, T={self.T})"


def unit_codec(tag: str) -> UnitCodec:
    return UnitCodec(tag)


def pair_codec(first: Codec, second: Codec) -> PairCodec:
    return PairCodec(first, second)


def vec_codec(elem: Codec, k: int) -> VecCodec:
    return VecCodec(elem, k)


def word_codec(tag: str, n: int) -> WordCodec:
    return WordCodec(tag, n)


def bit_word_codec(tag: str) -> BitWordCodec:
    return BitWordCodec(tag)


def trace_codec(inner: Codec, T: int) -> TraceCodec:
    return TraceCodec(inner, T)


def stream_vec_codec(tag: str, k: int, T: int) -> TraceCodec:
    """k wires of length-T traces as a trace of k-bit vectors."""
    return TraceCodec(VecCodec(UnitCodec(tag), k), T)
