"""The circuit AST: Atom, Plug, Ser, Par, Loop.

Every constructor checks interface shapes when it is called, so an ill-shaped
circuit value cannot exist. ``a | b`` is serial composition and ``a & b``
parallel composition; Python's precedence (``&`` binds tighter) matches the
usual reading ``fork | (x & y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence, Union

from .errors import InvalidMap, ShapeMismatch
from .shape import (
    PlugMap,
    Shape,
    Sum,
    SumN,
    Unit,
    identity_map,
    leaf_count,
    require_equal,
)


class Circuit:
    """Base class; every node knows its ``input_shape`` and ``output_shape``."""

    input_shape: Shape
    output_shape: Shape

    def __or__(self, other: "Circuit") -> "Circuit":
        return ser(self, other)

    def __and__(self, other: "Circuit") -> "Circuit":
        return par(self, other)

    def __str__(self):
        return f"{type(self).__name__}: {self.input_shape} -> {self.output_shape}"


@dataclass(frozen=True, eq=True)
class Atom(Circuit):
    gate: Any
    input_shape: Shape = field(init=False, repr=False, compare=False)
    output_shape: Shape = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "input_shape", self.gate.input_shape)
        object.__setattr__(self, "output_shape", self.gate.output_shape)


@dataclass(frozen=True, eq=True)
class Plug(Circuit):
    map: PlugMap
    input_shape: Shape = field(init=False, repr=False, compare=False)
    output_shape: Shape = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "input_shape", self.map.source)
        object.__setattr__(self, "output_shape", self.map.target)


@dataclass(frozen=True, eq=True)
class Ser(Circuit):
    first: Circuit
    second: Circuit
    input_shape: Shape = field(init=False, repr=False, compare=False)
    output_shape: Shape = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        require_equal(self.first.output_shape, self.second.input_shape, "serial composition")
        object.__setattr__(self, "input_shape", self.first.input_shape)
        object.__setattr__(self, "output_shape", self.second.output_shape)


@dataclass(frozen=True, eq=True)
class Par(Circuit):
    top: Circuit
    bottom: Circuit
    input_shape: Shape = field(init=False, repr=False, compare=False)
    output_shape: Shape = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "input_shape", Sum(self.top.input_shape, self.bottom.input_shape))
        object.__setattr__(self, "output_shape", Sum(self.top.output_shape, self.bottom.output_shape))


@dataclass(frozen=True, eq=True)
class Loop(Circuit):
    body: Circuit
    input_shape: Shape = field(init=False, repr=False, compare=False)
    output_shape: Shape = field(init=False, repr=False, compare=False)
    feedback: Shape = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        i, o = self.body.input_shape, self.body.output_shape
        if not isinstance(i, Sum):
            raise ShapeMismatch(Sum(i, Unit("?")), i, "loop body input must be n + p")
        if not isinstance(o, Sum):
            raise ShapeMismatch(Sum(o, Unit("?")), o, "loop body output must be m + p")
        require_equal(i.right, o.right, "loop feedback")
        object.__setattr__(self, "input_shape", i.left)
        object.__setattr__(self, "output_shape", o.left)
        object.__setattr__(self, "feedback", i.right)


def atom(gate) -> Atom:
    return Atom(gate)


def ser(a: Circuit, b: Circuit) -> Ser:
    return Ser(a, b)


def par(a: Circuit, b: Circuit) -> Par:
    return Par(a, b)


def loop(body: Circuit) -> Loop:
    return Loop(body)


def plug(input: Shape, output: Shape, map) -> Plug:
    """Rewiring circuit. ``map`` is a PlugMap, a callable on output indices, or
    a mapping output index -> input index."""
    if isinstance(map, PlugMap):
        require_equal(input, map.source, "plug input")
        require_equal(output, map.target, "plug output")
        return Plug(map)
    if callable(map):
        return Plug(PlugMap.from_function(input, output, map))
    return Plug(PlugMap.from_mapping(input, output, map))


def chain(*circuits: Circuit) -> Circuit:
    """``c0 | c1 | ... | cn``."""
    out = circuits[0]
    for c in circuits[1:]:
        out = ser(out, c)
    return out


# ---------------------------------------------------------------------------
# plug builders


def identity(s: Shape) -> Plug:
    return Plug(identity_map(s))


one = identity


def fork2(s: Shape) -> Plug:
    n = leaf_count(s)
    return Plug(PlugMap(s, Sum(s, s), tuple(range(n)) * 2))


def forget_left(s: Shape, t: Shape) -> Plug:
    n, m = leaf_count(s), leaf_count(t)
    return Plug(PlugMap(Sum(s, t), t, tuple(range(n, n + m))))


def forget_right(s: Shape, t: Shape) -> Plug:
    return Plug(PlugMap(Sum(s, t), s, tuple(range(leaf_count(s)))))


def swap(s: Shape, t: Shape) -> Plug:
    n, m = leaf_count(s), leaf_count(t)
    return Plug(PlugMap(Sum(s, t), Sum(t, s), tuple(range(n, n + m)) + tuple(range(n))))


def assoc_left(s: Shape, t: Shape, u: Shape) -> Plug:
    """s + (t + u)  ->  (s + t) + u"""
    n = leaf_count(s) + leaf_count(t) + leaf_count(u)
    return Plug(PlugMap(Sum(s, Sum(t, u)), Sum(Sum(s, t), u), tuple(range(n))))


def assoc_right(s: Shape, t: Shape, u: Shape) -> Plug:
    """(s + t) + u  ->  s + (t + u)"""
    n = leaf_count(s) + leaf_count(t) + leaf_count(u)
    return Plug(PlugMap(Sum(Sum(s, t), u), Sum(s, Sum(t, u)), tuple(range(n))))


def rewire(input: Shape, output: Shape, table: Union[Mapping, Sequence[int]]) -> Plug:
    """Plug from an explicit table.

    ``table`` is either a mapping from every output index to an input index,
    or a sequence giving, per flat output position, the flat input position.
    """
    if isinstance(table, Mapping):
        return Plug(PlugMap.from_mapping(input, output, table))
    table = tuple(table)
    if len(table) != leaf_count(output):
        raise InvalidMap(
            f"rewire table has {len(table)} entries for {leaf_count(output)} output leaves"
        )
    return Plug(PlugMap(input, output, table))


def split_range(x: str, n: int, p: int) -> Plug:
    """sumn x (n+p) -> sumn x n + sumn x p, low positions on the left."""
    return Plug(PlugMap(SumN(Unit(x), n + p), Sum(SumN(Unit(x), n), SumN(Unit(x), p)), tuple(range(n + p))))


def join_range(x: str, n: int, p: int) -> Plug:
    return Plug(PlugMap(Sum(SumN(Unit(x), n), SumN(Unit(x), p)), SumN(Unit(x), n + p), tuple(range(n + p))))


# Patterns for `rearrange`: a str binds/uses a whole sub-shape, a tuple (p, q)
# is a binary sum and a list [p0, ..., pk-1] is an n-ary sum of k copies.


def _bind(pattern, shape: Shape, path: tuple, env: dict) -> None:
    if isinstance(pattern, str):
        if pattern in env:
            raise InvalidMap(f"pattern name {pattern!r} bound twice")
        env[pattern] = (shape, path)
    elif isinstance(pattern, tuple):
        if len(pattern) != 2 or not isinstance(shape, Sum):
            raise ShapeMismatch(Sum(Unit("?"), Unit("?")), shape, f"pattern {pattern!r}")
        _bind(pattern[0], shape.left, path + ("L",), env)
        _bind(pattern[1], shape.right, path + ("R",), env)
    elif isinstance(pattern, list):
        if not isinstance(shape, SumN) or shape.count != len(pattern):
            raise ShapeMismatch(SumN(Unit("?"), len(pattern)), shape, f"pattern {pattern!r}")
        for i, p in enumerate(pattern):
            _bind(p, shape.base, path + (i,), env)
    elif pattern is not None:
        raise TypeError(f"bad pattern {pattern!r}")


def _build(pattern, env: dict):
    """Return (shape, [(out_path_prefix, in_path_prefix)])."""
    if isinstance(pattern, str):
        if pattern not in env:
            raise InvalidMap(f"pattern name {pattern!r} is not bound by the input pattern")
        shape, src = env[pattern]
        return shape, [((), src)]
    if isinstance(pattern, tuple):
        ls, lm = _build(pattern[0], env)
        rs, rm = _build(pattern[1], env)
        return Sum(ls, rs), [(("L",) + o, i) for o, i in lm] + [(("R",) + o, i) for o, i in rm]
    if isinstance(pattern, list):
        parts = [_build(p, env) for p in pattern]
        if not parts:
            raise InvalidMap("empty list pattern has no element shape; use rewire")
        base = parts[0][0]
        for s, _ in parts[1:]:
            require_equal(base, s, "list pattern elements")
        links = [((k,) + o, i) for k, (_, m) in enumerate(parts) for o, i in m]
        return SumN(base, len(parts)), links
    raise TypeError(f"bad pattern {pattern!r}")


def rearrange(input: Shape, src, dst) -> Plug:
    """Plug that destructures ``input`` with ``src`` and rebuilds it as ``dst``.

    Names may be repeated in ``dst`` (fan-out) or omitted (forgotten), e.g.
    ``rearrange(s, ("x", ("y", "z")), (("x", "y"), "z"))`` is ``assoc_left``.
    """
    env: dict = {}
    _bind(src, input, (), env)
    output, links = _build(dst, env)

    def fn(o):
        for out_prefix, in_prefix in links:
            k = len(out_prefix)
            if o[:k] == out_prefix:
                return in_prefix + o[k:]
        return None

    return Plug(PlugMap.from_function(input, output, fn))


def is_plug_only(c: Circuit) -> bool:
    if isinstance(c, Plug):
        return True
    if isinstance(c, Atom):
        return False
    if isinstance(c, (Ser, Par)):
        a, b = (c.first, c.second) if isinstance(c, Ser) else (c.top, c.bottom)
        return is_plug_only(a) and is_plug_only(b)
    return is_plug_only(c.body)


def plug_map_of(c: Circuit) -> PlugMap:
    """Collapse a plug-only circuit into its single PlugMap."""
    if isinstance(c, Plug):
        return c.map
    if isinstance(c, Ser):
        return plug_map_of(c.first).then(plug_map_of(c.second))
    if isinstance(c, Par):
        f, g = plug_map_of(c.top), plug_map_of(c.bottom)
        off = leaf_count(f.source)
        return PlugMap(c.input_shape, c.output_shape, f.table + tuple(off + i for i in g.table))
    raise TypeError(f"{type(c).__name__} is not a plug-only circuit")


def atoms(c: Circuit):
    """Atoms of ``c`` in left-to-right structural order."""
    if isinstance(c, Atom):
        yield c
    elif isinstance(c, Ser):
        yield from atoms(c.first)
        yield from atoms(c.second)
    elif isinstance(c, Par):
        yield from atoms(c.top)
        yield from atoms(c.bottom)
    elif isinstance(c, Loop):
        yield from atoms(c.body)
