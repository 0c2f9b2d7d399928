"""Shape-indexed structural circuits: construction, simulation, checking.

Circuits are built from gates and plugs with serial (``|``), parallel (``&``)
and feedback composition; every composition is shape-checked when built.
"""

from .circuit import (
    Atom,
    Circuit,
    Loop,
    Par,
    Plug,
    Ser,
    assoc_left,
    assoc_right,
    atom,
    chain,
    fork2,
    forget_left,
    forget_right,
    identity,
    loop,
    one,
    par,
    plug,
    rearrange,
    rewire,
    ser,
    swap,
)
from .codec import (
    Codec,
    Trace,
    Word,
    bit_word_codec,
    pair_codec,
    stream_vec_codec,
    trace_codec,
    unit_codec,
    vec_codec,
    word_codec,
)
from .errors import (
    ArityMismatch,
    CircuitError,
    CombinationalLoop,
    DomainTooLarge,
    HasDelay,
    InvalidMap,
    LengthMismatch,
    NotASum,
    ParseError,
    SequentialGate,
    ShapeMismatch,
)
from .gates import AND, DFF, MUX, NOR, NOT, OR, XOR, GateKind, expand_to_nor, gate
from .semantics import (
    Netlist,
    elaborate,
    eval_combinational,
    eval_many,
    eval_structural,
    lift_combinational,
    sim_clocked,
    sim_many,
)
from .shape import Bundle, PlugMap, Shape, Sum, SumN, Unit, bits, leaf_count
from .analyses import critical_path, from_netlist_file, gate_count, to_dot, to_netlist_file
from .generators import GENERATORS, build
from .verify import (
    EXHAUSTIVE,
    CheckReport,
    Sampled,
    check_equivalent,
    check_implements,
    check_lift,
    check_nor_equiv,
    check_realise_trace,
)
from .claims import CLAIMS, run_claim

__version__ = "0.1.0"
