"""Interpretations of circuits other than simulation: gate counts, unit-delay
critical path, DOT export and the text netlist format.

Netlist file grammar (one record per line, ``#`` starts a comment line)::

    file     := header shapes inputs outputs gates nets "end"
    header   := "hdlkernel-netlist 1"
    shapes   := "input_shape" SHAPE  /  "output_shape" SHAPE
    inputs   := "inputs" COUNT   then COUNT lines:  NAME TAG PATH
    outputs  := "outputs" COUNT  then COUNT lines:  NAME TAG PATH DRIVER
    gates    := "gates" COUNT    then COUNT lines:  NAME KIND TAG* ":" DRIVER*
    nets     := "nets" COUNT     then COUNT lines:  DRIVER "->" SINK*
    SHAPE    := "(unit" TAG ")" | "(+" SHAPE SHAPE ")" | "(sumn" SHAPE COUNT ")"
    PATH     := "ε" | STEP ("." STEP)*     STEP := "L" | "R" | COUNT
    SINK     := NAME ":" PIN | "out:" NAME

Gate lines carry ``arity + 1`` tags (inputs then output) and ``arity`` drivers.
The nets section is redundant with the gate and output lines and is checked
against them when reading.
"""

from __future__ import annotations

import re
from typing import Mapping, Optional, Union

import numpy as np

from . import _kernels
from .circuit import Circuit, atoms
from .errors import ParseError
from .gates import ARITY, CODES, GateKind
from .semantics import Netlist, Node, OutPort, Port, compile_netlist, elaborate
from .shape import Shape, Sum, SumN, Unit, format_index, parse_index

DEFAULT_DELAYS = {k: 1 for k in GateKind if k is not GateKind.DFF}


def gate_count(c: Union[Circuit, Netlist]) -> dict:
    """Atoms per gate kind, in order of first appearance. Plugs cost nothing."""
    counts: dict = {}
    kinds = (n.kind for n in c.nodes) if isinstance(c, Netlist) else (a.gate.kind for a in atoms(c))
    for k in kinds:
        counts[k] = counts.get(k, 0) + 1
    return counts


def critical_path(c: Union[Circuit, Netlist], delays: Optional[Mapping] = None) -> int:
    """Longest combinational path in gate delays (unit delay by default).

    Paths start at primary inputs or DFF outputs and end at primary outputs
    or DFF inputs; DFFs add nothing.
    """
    nl = c if isinstance(c, Netlist) else elaborate(c)
    k = compile_netlist(nl)
    table = dict(DEFAULT_DELAYS)
    if delays:
        table.update({GateKind(x) if isinstance(x, str) else x: v for x, v in delays.items()})
    by_code = {CODES[g]: table.get(g, 0) for g in GateKind}
    delay = np.array([by_code[int(x)] for x in k.kind], dtype=np.int64)
    endpoints = np.concatenate([k.out_slots, k.dff_d]).astype(np.int64)
    return _kernels.longest_path(k.a, k.b, k.c, k.out, delay, k.n_slots, endpoints)


# ---------------------------------------------------------------------------
# DOT


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(nl: Union[Netlist, Circuit], name: str = "circuit") -> str:
    if isinstance(nl, Circuit):
        nl = elaborate(nl)
    ref = {p.name: f"in:{p.name}" for p in nl.inputs}
    ref.update({n.name: f"g:{n.name}" for n in nl.nodes})
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for p in nl.inputs:
        lines.append(f"  {_q(ref[p.name])} [shape=invhouse, label={_q(p.tag + ' ' + format_index(p.path))}];")
    for n in nl.nodes:
        shape = "box3d" if n.kind is GateKind.DFF else "box"
        lines.append(f"  {_q(ref[n.name])} [shape={shape}, label={_q(f'{n.kind} {n.name}')}];")
    for o in nl.outputs:
        lines.append(f"  {_q('out:' + o.name)} [shape=house, label={_q(o.tag + ' ' + format_index(o.path))}];")
    for n in nl.nodes:
        for pin, d in enumerate(n.fanin):
            lines.append(f"  {_q(ref[d])} -> {_q(ref[n.name])} [headlabel={_q(str(pin))}];")
    for o in nl.outputs:
        lines.append(f"  {_q(ref[o.driver])} -> {_q('out:' + o.name)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# netlist file

HEADER = "hdlkernel-netlist 1"
_TOKEN = re.compile(r"^[^\s():#]+$")


def shape_to_text(s: Shape) -> str:
    if isinstance(s, Unit):
        return f"(unit {s.tag})"
    if isinstance(s, Sum):
        return f"(+ {shape_to_text(s.left)} {shape_to_text(s.right)})"
    return f"(sumn {shape_to_text(s.base)} {s.count})"


def shape_from_text(text: str) -> Shape:
    tokens = re.findall(r"\(|\)|[^\s()]+", text)
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of shape")
        pos += 1
        return tokens[pos - 1]

    def expect(tok):
        got = take()
        if got != tok:
            raise ValueError(f"expected {tok!r}, got {got!r}")

    def parse():
        expect("(")
        head = take()
        if head == "unit":
            s = Unit(take())
        elif head == "+":
            s = Sum(parse(), parse())
        elif head == "sumn":
            base = parse()
            count = take()
            if not count.isdigit():
                raise ValueError(f"bad sumn count {count!r}")
            s = SumN(base, int(count))
        else:
            raise ValueError(f"unknown shape constructor {head!r}")
        expect(")")
        return s

    s = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens after shape: {tokens[pos:]}")
    return s


def _check_ident(s: str, what: str) -> None:
    if not _TOKEN.match(s) or s in ("->", "ε", "end"):
        raise ValueError(f"{what} {s!r} cannot be written to a netlist file")


def to_netlist_file(nl: Union[Netlist, Circuit]) -> str:
    if isinstance(nl, Circuit):
        nl = elaborate(nl)
    for p in nl.inputs:
        _check_ident(p.tag, "tag")
    for o in nl.outputs:
        _check_ident(o.tag, "tag")
    for n in nl.nodes:
        for t in n.tags:
            _check_ident(t, "tag")
    out = [HEADER]
    out.append(f"input_shape {shape_to_text(nl.input_shape)}")
    out.append(f"output_shape {shape_to_text(nl.output_shape)}")
    out.append(f"inputs {len(nl.inputs)}")
    out += [f"{p.name} {p.tag} {format_index(p.path)}" for p in nl.inputs]
    out.append(f"outputs {len(nl.outputs)}")
    out += [f"{o.name} {o.tag} {format_index(o.path)} {o.driver}" for o in nl.outputs]
    out.append(f"gates {len(nl.nodes)}")
    out += [f"{n.name} {n.kind} {' '.join(n.tags)} : {' '.join(n.fanin)}".rstrip() for n in nl.nodes]
    nets = nl.nets
    out.append(f"nets {len(nets)}")
    out += [f"{d} -> {' '.join(sinks)}".rstrip() for d, sinks in nets.items()]
    out.append("end")
    return "\n".join(out) + "\n"


def from_netlist_file(text: str) -> Netlist:
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    pos = 0

    def next_line(what):
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 0
            raise ParseError(f"unexpected end of file, expected {what}", line=last + 1)
        pos += 1
        return lines[pos - 1]

    def keyword(kw):
        no, line = next_line(kw)
        head, _, rest = line.partition(" ")
        if head != kw:
            raise ParseError(f"expected section {kw!r}, got {head!r}", line=no)
        return no, rest.strip()

    def count(kw):
        no, rest = keyword(kw)
        if not rest.isdigit():
            raise ParseError(f"{kw} count must be a natural number, got {rest!r}", line=no, field=kw)
        return int(rest)

    no, line = next_line("header")
    if line != HEADER:
        raise ParseError(f"expected header {HEADER!r}", line=no)
    shapes = []
    for kw in ("input_shape", "output_shape"):
        no, rest = keyword(kw)
        try:
            shapes.append(shape_from_text(rest))
        except ValueError as e:
            raise ParseError(str(e), line=no, field=kw) from None

    def path(no, s, fieldname):
        try:
            return parse_index(s)
        except ValueError as e:
            raise ParseError(str(e), line=no, field=fieldname) from None

    inputs = []
    for _ in range(count("inputs")):
        no, line = next_line("input port")
        f = line.split()
        if len(f) != 3:
            raise ParseError(f"input line needs NAME TAG PATH, got {len(f)} fields", line=no)
        inputs.append(Port(f[0], f[1], path(no, f[2], "path")))
    outputs = []
    for _ in range(count("outputs")):
        no, line = next_line("output port")
        f = line.split()
        if len(f) != 4:
            raise ParseError(f"output line needs NAME TAG PATH DRIVER, got {len(f)} fields", line=no)
        outputs.append(OutPort(f[0], f[1], path(no, f[2], "path"), f[3]))
    nodes = []
    for _ in range(count("gates")):
        no, line = next_line("gate")
        left, sep, right = line.partition(" : ")
        if not sep:
            if line.endswith(" :"):
                left, right = line[:-2], ""
            else:
                raise ParseError("gate line needs ' : ' between tags and drivers", line=no)
        f = left.split()
        if len(f) < 2:
            raise ParseError("gate line needs NAME KIND", line=no)
        try:
            kind = GateKind(f[1])
        except ValueError:
            raise ParseError(f"unknown gate kind {f[1]!r}", line=no, field="kind") from None
        tags, fanin = tuple(f[2:]), tuple(right.split())
        if len(tags) != ARITY[kind] + 1:
            raise ParseError(f"{kind} needs {ARITY[kind] + 1} tags, got {len(tags)}", line=no, field="tags")
        if len(fanin) != ARITY[kind]:
            raise ParseError(f"{kind} needs {ARITY[kind]} drivers, got {len(fanin)}", line=no, field="drivers")
        nodes.append(Node(f[0], kind, tags, fanin))
    names = [p.name for p in inputs] + [n.name for n in nodes]
    if len(set(names)) != len(names):
        raise ParseError("duplicate driver names among inputs and gates")
    known = set(names)
    for n in nodes:
        for d in n.fanin:
            if d not in known:
                raise ParseError(f"gate {n.name} reads unknown driver {d!r}", field="drivers")
    for o in outputs:
        if o.driver not in known:
            raise ParseError(f"output {o.name} reads unknown driver {o.driver!r}", field="driver")
    nl = Netlist(shapes[0], shapes[1], tuple(inputs), tuple(outputs), tuple(nodes))
    expected = nl.nets
    seen = {}
    for _ in range(count("nets")):
        no, line = next_line("net")
        f = line.split()
        if len(f) < 2 or f[1] != "->":
            raise ParseError("net line needs DRIVER -> SINK*", line=no)
        seen[f[0]] = f[2:]
        if expected.get(f[0]) != f[2:]:
            raise ParseError(f"net {f[0]} disagrees with the gate/output sections", line=no, field="nets")
    if seen.keys() != expected.keys():
        raise ParseError("nets section does not list every driver", field="nets")
    no, line = next_line("end")
    if line != "end":
        raise ParseError(f"expected 'end', got {line!r}", line=no)
    if pos != len(lines):
        raise ParseError("content after 'end'", line=lines[pos][0])
    _check_ports(nl)
    return nl


def _check_ports(nl: Netlist) -> None:
    from .shape import enumerate_indices, leaf_tags

    for ports, shape, what in ((nl.inputs, nl.input_shape, "inputs"), (nl.outputs, nl.output_shape, "outputs")):
        got = [(p.tag, tuple(p.path)) for p in ports]
        want = list(zip(leaf_tags(shape), enumerate_indices(shape)))
        if got != want:
            raise ParseError(f"{what} do not match the leaves of {shape}", field=what)
