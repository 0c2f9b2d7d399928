"""Meaning of circuits, executed.

Two evaluators exist on purpose. ``eval_structural`` walks the AST and applies
the serial, parallel and plug rules literally on bundles; it is the reference.
Everything else goes through ``elaborate`` (flat netlist) and ``compile_netlist``
(topologically ordered arrays for the kernels in ``_kernels``), which is the fast
path and the only one that handles DFFs and feedback.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import _kernels
from .circuit import Atom, Circuit, Loop, Par, Plug, Ser, atoms
from .errors import CombinationalLoop, HasDelay, LengthMismatch
from .gates import CODES, GateKind, bool_sem
from .shape import (
    Bundle,
    Shape,
    bundle_append,
    bundle_left,
    bundle_precompose,
    bundle_right,
    enumerate_indices,
    leaf_count,
    leaf_tags,
)


@dataclass(frozen=True)
class Port:
    name: str
    tag: str
    path: tuple


@dataclass(frozen=True)
class OutPort:
    name: str
    tag: str
    path: tuple
    driver: str


@dataclass(frozen=True)
class Node:
    name: str
    kind: GateKind
    tags: tuple
    fanin: tuple

    @property
    def is_dff(self) -> bool:
        return self.kind is GateKind.DFF


@dataclass(frozen=True)
class Netlist:
    """Flat gate graph. Drivers are named by input ports or gate nodes; each gate
    has one output, so a node's name is also the name of the net it drives."""

    input_shape: Shape
    output_shape: Shape
    inputs: tuple
    outputs: tuple
    nodes: tuple
    _compiled: object = field(default=None, init=False, repr=False, compare=False)

    @property
    def nets(self) -> dict:
        """driver name -> list of sinks (``node:pin`` or ``out:port``), in order."""
        sinks = {p.name: [] for p in self.inputs}
        for n in self.nodes:
            sinks[n.name] = []
        for n in self.nodes:
            for pin, d in enumerate(n.fanin):
                sinks[d].append(f"{n.name}:{pin}")
        for o in self.outputs:
            sinks[o.driver].append(f"out:{o.name}")
        return sinks

    @property
    def has_dff(self) -> bool:
        return any(n.is_dff for n in self.nodes)

    def gate_count(self) -> dict:
        counts: dict = {}
        for n in self.nodes:
            counts[n.kind] = counts.get(n.kind, 0) + 1
        return counts


class _Feedback:
    """Placeholder for a loop wire whose driver is known only after the body."""

    __slots__ = ("target",)

    def __init__(self):
        self.target = None


def _namer():
    counts: dict = defaultdict(int)

    def fresh(tag):
        k = counts[tag]
        counts[tag] += 1
        return f"{tag}#{k}"

    return fresh


def elaborate(c: Circuit) -> Netlist:
    """Flatten ``c``; plugs vanish into connectivity, loops close feedback wires."""
    cached = c.__dict__.get("_netlist")
    if cached is not None:
        return cached
    fresh = _namer()
    inputs = tuple(
        Port(fresh(t), t, i) for t, i in zip(leaf_tags(c.input_shape), enumerate_indices(c.input_shape))
    )
    raw_nodes = []

    def walk(c, srcs):
        if isinstance(c, Atom):
            g = c.gate
            name = fresh(g.output_tag)
            raw_nodes.append((name, g, list(srcs)))
            return [name]
        if isinstance(c, Plug):
            return [srcs[i] for i in c.map.table]
        if isinstance(c, Ser):
            return walk(c.second, walk(c.first, srcs))
        if isinstance(c, Par):
            k = leaf_count(c.top.input_shape)
            return walk(c.top, srcs[:k]) + walk(c.bottom, srcs[k:])
        if isinstance(c, Loop):
            fbs = [_Feedback() for _ in range(leaf_count(c.feedback))]
            outs = walk(c.body, list(srcs) + fbs)
            m = leaf_count(c.output_shape)
            for fb, drv in zip(fbs, outs[m:]):
                fb.target = drv
            return outs[:m]
        raise TypeError(f"not a circuit: {c!r}")

    outs = walk(c, [p.name for p in inputs])

    def resolve(ref):
        seen = set()
        while isinstance(ref, _Feedback):
            if id(ref) in seen or ref.target is None:
                raise CombinationalLoop("feedback wire with no driver (a loop made of plugs only)")
            seen.add(id(ref))
            ref = ref.target
        return ref

    nodes = tuple(
        Node(name, g.kind, g.tags, tuple(resolve(s) for s in srcs)) for name, g, srcs in raw_nodes
    )
    ofresh = _namer()
    outputs = tuple(
        OutPort(ofresh(t), t, i, resolve(d))
        for t, i, d in zip(leaf_tags(c.output_shape), enumerate_indices(c.output_shape), outs)
    )
    nl = Netlist(c.input_shape, c.output_shape, inputs, outputs, nodes)
    object.__setattr__(c, "_netlist", nl)
    return nl


@dataclass
class Compiled:
    """Kernel-ready arrays for one netlist."""

    n_in: int
    n_slots: int
    kind: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    out: np.ndarray
    dff_d: np.ndarray
    dff_q: np.ndarray
    out_slots: np.ndarray
    dff_names: tuple


def compile_netlist(nl: Netlist) -> Compiled:
    """Order combinational nodes topologically, cutting at DFF outputs.

    Raises CombinationalLoop if some cycle contains no DFF.
    """
    if nl._compiled is not None:
        return nl._compiled
    slot = {p.name: i for i, p in enumerate(nl.inputs)}
    for j, n in enumerate(nl.nodes):
        slot[n.name] = len(nl.inputs) + j
    for n in nl.nodes:
        for d in n.fanin:
            if d not in slot:
                raise CombinationalLoop(f"{n.name} reads undriven net {d!r}")
    comb = {n.name: n for n in nl.nodes if not n.is_dff}
    # Kahn over combinational nodes; inputs and DFF outputs are sources
    pending = {name: sum(1 for d in n.fanin if d in comb) for name, n in comb.items()}
    users = defaultdict(list)
    for name, n in comb.items():
        for d in n.fanin:
            if d in comb:
                users[d].append(name)
    order = [name for name in comb if pending[name] == 0]
    head = 0
    while head < len(order):
        for u in users[order[head]]:
            pending[u] -= 1
            if pending[u] == 0:
                order.append(u)
        head += 1
    if len(order) != len(comb):
        stuck = sorted(name for name, k in pending.items() if k > 0)
        raise CombinationalLoop(f"cycle without a DFF through {', '.join(stuck[:8])}")

    def operands(n):
        ops = [slot[d] for d in n.fanin] + [-1] * (3 - len(n.fanin))
        return ops

    rows = [operands(comb[name]) for name in order]
    dffs = [n for n in nl.nodes if n.is_dff]
    compiled = Compiled(
        n_in=len(nl.inputs),
        n_slots=len(nl.inputs) + len(nl.nodes),
        kind=np.array([CODES[comb[name].kind] for name in order], dtype=np.int64),
        a=np.array([r[0] for r in rows], dtype=np.int64),
        b=np.array([r[1] for r in rows], dtype=np.int64),
        c=np.array([r[2] for r in rows], dtype=np.int64),
        out=np.array([slot[name] for name in order], dtype=np.int64),
        dff_d=np.array([slot[n.fanin[0]] for n in dffs], dtype=np.int64),
        dff_q=np.array([slot[n.name] for n in dffs], dtype=np.int64),
        out_slots=np.array([slot[o.driver] for o in nl.outputs], dtype=np.int64),
        dff_names=tuple(n.name for n in dffs),
    )
    object.__setattr__(nl, "_compiled", compiled)
    return compiled


def _as_netlist(c: Union[Circuit, Netlist]) -> Netlist:
    return c if isinstance(c, Netlist) else elaborate(c)


def require_delay_free(c: Union[Circuit, Netlist]) -> None:
    if isinstance(c, Netlist):
        found = c.has_dff
    else:
        found = any(a.gate.kind is GateKind.DFF for a in atoms(c))
    if found:
        raise HasDelay("circuit contains a DFF; use sim_clocked")


# ---------------------------------------------------------------------------
# combinational evaluation


def eval_structural(c: Circuit, ins: Bundle) -> Bundle:
    """Reference evaluator on loop-free, DFF-free circuits, straight off the AST."""
    if isinstance(c, Atom):
        if c.gate.kind is GateKind.DFF:
            raise HasDelay("DFF has no combinational meaning")
        return Bundle(c.output_shape, (bool_sem(c.gate.kind, ins.values),))
    if isinstance(c, Plug):
        return bundle_precompose(c.map, ins)
    if isinstance(c, Ser):
        return eval_structural(c.second, eval_structural(c.first, ins))
    if isinstance(c, Par):
        return bundle_append(
            eval_structural(c.top, bundle_left(ins)), eval_structural(c.bottom, bundle_right(ins))
        )
    if isinstance(c, Loop):
        raise CombinationalLoop("the structural evaluator handles loop-free circuits only")
    raise TypeError(f"not a circuit: {c!r}")


def eval_many(c: Union[Circuit, Netlist], cases: np.ndarray) -> np.ndarray:
    """Evaluate a delay-free circuit on a ``(n_cases, n_inputs)`` 0/1 matrix."""
    nl = _as_netlist(c)
    require_delay_free(nl)
    k = compile_netlist(nl)
    cases = np.asarray(cases, dtype=np.uint8)
    if cases.ndim != 2 or cases.shape[1] != k.n_in:
        raise LengthMismatch(f"expected (cases, {k.n_in}) input matrix, got {cases.shape}")
    vals = np.zeros((k.n_slots, cases.shape[0]), dtype=np.uint8)
    vals[: k.n_in] = cases.T
    _kernels.comb_eval(k.kind, k.a, k.b, k.c, k.out, vals)
    return vals[k.out_slots].T.copy()


def eval_combinational(c: Union[Circuit, Netlist], ins: Bundle) -> Bundle:
    nl = _as_netlist(c)
    if ins.shape != nl.input_shape:
        from .shape import require_equal

        require_equal(nl.input_shape, ins.shape, "eval_combinational input")
    row = eval_many(nl, np.array([ins.values], dtype=np.uint8).reshape(1, -1))[0]
    return Bundle(nl.output_shape, (bool(v) for v in row))


# ---------------------------------------------------------------------------
# clocked simulation


def sim_many(c: Union[Circuit, Netlist], inputs: np.ndarray) -> np.ndarray:
    """Synchronous simulation on a ``(T, n_inputs, batch)`` 0/1 array.

    Every DFF starts false. Returns ``(T, n_outputs, batch)``.
    """
    nl = _as_netlist(c)
    k = compile_netlist(nl)
    inputs = np.ascontiguousarray(inputs, dtype=np.uint8)
    if inputs.ndim != 3 or inputs.shape[1] != k.n_in:
        raise LengthMismatch(f"expected (T, {k.n_in}, batch) inputs, got {inputs.shape}")
    return _kernels.sim(
        k.kind, k.a, k.b, k.c, k.out, k.dff_d, k.dff_q, k.out_slots, k.n_slots, inputs
    )


def trace_length(ins: Bundle) -> int:
    lengths = {len(tr) for tr in ins.values}
    if len(lengths) > 1:
        raise LengthMismatch(f"ragged traces: lengths {sorted(lengths)}")
    return lengths.pop() if lengths else 0


def sim_clocked(c: Union[Circuit, Netlist], ins: Bundle, T: Optional[int] = None) -> Bundle:
    """Bundle of input traces -> bundle of output traces of the same length."""
    nl = _as_netlist(c)
    if ins.shape != nl.input_shape:
        from .shape import require_equal

        require_equal(nl.input_shape, ins.shape, "sim_clocked input")
    if ins.values:
        T = trace_length(ins)
    elif T is None:
        raise LengthMismatch("no input wires; pass T explicitly")
    arr = np.zeros((T, len(ins.values), 1), dtype=np.uint8)
    for w, tr in enumerate(ins.values):
        arr[:, w, 0] = np.asarray(tr, dtype=np.uint8)
    res = sim_many(nl, arr)
    return Bundle(nl.output_shape, (tuple(bool(v) for v in res[:, o, 0]) for o in range(res.shape[1])))


@dataclass(frozen=True)
class LiftClaim:
    """A delay-free circuit together with the statement that its clocked
    behaviour is the pointwise map of its boolean behaviour."""

    circuit: Circuit

    def pointwise(self, ins: Bundle) -> Bundle:
        T = trace_length(ins)
        per_tick = [
            eval_combinational(self.circuit, Bundle(ins.shape, (tr[t] for tr in ins.values)))
            for t in range(T)
        ]
        n_out = leaf_count(self.circuit.output_shape)
        return Bundle(
            self.circuit.output_shape,
            (tuple(per_tick[t].values[o] for t in range(T)) for o in range(n_out)),
        )

    def holds_on(self, ins: Bundle) -> bool:
        return sim_clocked(self.circuit, ins) == self.pointwise(ins)


def lift_combinational(c: Circuit) -> LiftClaim:
    require_delay_free(c)
    compile_netlist(elaborate(c))
    return LiftClaim(c)
