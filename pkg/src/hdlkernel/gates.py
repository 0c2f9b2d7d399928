"""Gate technology: NOR plus derived gates and the DFF.

Each combinational gate also has a NOR-only body; ``expand_to_nor`` swaps
atoms for those bodies without changing any interface.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from . import circuit as C
from .errors import ArityMismatch, SequentialGate
from .shape import Sum, Unit, leaf_count


class GateKind(enum.Enum):
    NOR = "NOR"
    NOT = "NOT"
    AND = "AND"
    OR = "OR"
    XOR = "XOR"
    MUX = "MUX"
    DFF = "DFF"

    def __str__(self):
        return self.value

    @property
    def arity(self) -> int:
        return ARITY[self]

    @property
    def code(self) -> int:
        return CODES[self]


ARITY = {
    GateKind.NOR: 2,
    GateKind.NOT: 1,
    GateKind.AND: 2,
    GateKind.OR: 2,
    GateKind.XOR: 2,
    GateKind.MUX: 3,
    GateKind.DFF: 1,
}

# integer opcodes used by the evaluation kernels
CODES = {k: i for i, k in enumerate(GateKind)}
BY_CODE = {i: k for k, i in CODES.items()}


@dataclass(frozen=True)
class GateInstance:
    """A gate with wire tags: inputs first, then the single output.

    MUX inputs are (select, then, else) and its input shape nests as
    ``select + (then + else)``.
    """

    kind: GateKind
    tags: tuple

    def __post_init__(self):
        object.__setattr__(self, "tags", tuple(self.tags))
        if len(self.tags) != self.kind.arity + 1:
            raise ArityMismatch(
                f"{self.kind} takes {self.kind.arity} input tags and 1 output tag, got {self.tags}"
            )

    @property
    def input_tags(self) -> tuple:
        return self.tags[:-1]

    @property
    def output_tag(self) -> str:
        return self.tags[-1]

    @property
    def input_shape(self):
        u = [Unit(t) for t in self.input_tags]
        if len(u) == 1:
            return u[0]
        if len(u) == 2:
            return Sum(u[0], u[1])
        return Sum(u[0], Sum(u[1], u[2]))

    @property
    def output_shape(self):
        return Unit(self.output_tag)

    def __str__(self):
        return f"{self.kind} {' '.join(self.tags)}"


def gate(kind: GateKind, *tags: str) -> C.Atom:
    return C.atom(GateInstance(kind, tags))


def NOR(a, b, o):
    return gate(GateKind.NOR, a, b, o)


def NOT(a, o):
    return gate(GateKind.NOT, a, o)


def AND(a, b, o):
    return gate(GateKind.AND, a, b, o)


def OR(a, b, o):
    return gate(GateKind.OR, a, b, o)


def XOR(a, b, o):
    return gate(GateKind.XOR, a, b, o)


def MUX(sel, then, else_, o):
    return gate(GateKind.MUX, sel, then, else_, o)


def DFF(a, o):
    return gate(GateKind.DFF, a, o)


def bool_sem(kind: GateKind, inputs: Sequence[bool]) -> bool:
    if kind is GateKind.DFF:
        raise SequentialGate("DFF has no boolean (combinational) semantics")
    if len(inputs) != kind.arity:
        raise ArityMismatch(f"{kind} expects {kind.arity} inputs, got {len(inputs)}")
    x = [bool(v) for v in inputs]
    if kind is GateKind.NOR:
        return not (x[0] or x[1])
    if kind is GateKind.NOT:
        return not x[0]
    if kind is GateKind.AND:
        return x[0] and x[1]
    if kind is GateKind.OR:
        return x[0] or x[1]
    if kind is GateKind.XOR:
        return x[0] != x[1]
    return x[1] if x[0] else x[2]


def dff_step(state: bool, value: bool) -> tuple:
    """One clock tick of a DFF: ``(output, next_state)``."""
    return state, value


DFF_INITIAL = False


# NOR-only bodies as straight-line programs over input positions. Operand k
# refers to input k when k < arity, else to the result of op k - arity.
NOR_PROGRAMS = {
    GateKind.NOT: [(0, 0)],
    GateKind.OR: [(0, 1), (2, 2)],
    GateKind.AND: [(0, 0), (1, 1), (2, 3)],
    GateKind.XOR: [(0, 1), (0, 0), (1, 1), (3, 4), (2, 5)],
    # out = (s or e) and (not s or t) = NOR(NOR(s, e), NOR(not s, t))
    GateKind.MUX: [(0, 0), (0, 2), (3, 1), (4, 5)],
}


def nor_network(input_shape, output_tag: str, program, prefix: str) -> C.Circuit:
    """Compile a straight-line NOR program into a circuit ``input_shape -> 1_output_tag``.

    The circuit threads a growing bus of every signal computed so far: each step
    forks two operands off the bus and appends one NOR result.
    """
    n_in = leaf_count(input_shape)
    bus = input_shape
    c = C.identity(bus)
    for step, (x, y) in enumerate(program):
        last = step == len(program) - 1
        out = output_tag if last else f"{prefix}{step}"
        g = NOR(f"{prefix}x", f"{prefix}y", out)
        width = leaf_count(bus)
        c = c | C.rewire(bus, Sum(bus, g.input_shape), tuple(range(width)) + (x, y))
        c = c | (C.identity(bus) & g)
        bus = Sum(bus, Unit(out))
    final = n_in + len(program) - 1
    return c | C.rewire(bus, Unit(output_tag), (final,))


def nor_body(g: GateInstance) -> C.Circuit:
    if g.kind in (GateKind.NOR, GateKind.DFF):
        return C.atom(g)
    return nor_network(g.input_shape, g.output_tag, NOR_PROGRAMS[g.kind], f"{g.output_tag}~")


def expand_to_nor(c: C.Circuit) -> C.Circuit:
    """Same interface, every combinational atom replaced by NOR gates."""
    if isinstance(c, C.Atom):
        return nor_body(c.gate)
    if isinstance(c, C.Plug):
        return c
    if isinstance(c, C.Ser):
        return C.Ser(expand_to_nor(c.first), expand_to_nor(c.second))
    if isinstance(c, C.Par):
        return C.Par(expand_to_nor(c.top), expand_to_nor(c.bottom))
    if isinstance(c, C.Loop):
        return C.Loop(expand_to_nor(c.body))
    raise TypeError(f"not a circuit: {c!r}")
