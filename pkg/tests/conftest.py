import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hdlkernel import gates as g
from hdlkernel.circuit import identity, rewire
from hdlkernel.shape import Sum, SumN, Unit, leaf_count

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

TAGS = "abcxy"


def shapes(max_leaves=8):
    """Random shapes with at most ``max_leaves`` leaves (zero-leaf SumN allowed)."""
    units = st.sampled_from(TAGS).map(Unit)

    def extend(inner):
        return st.one_of(
            st.tuples(inner, inner).map(lambda p: Sum(*p)),
            st.tuples(inner, st.integers(0, 3)).map(lambda p: SumN(*p)),
        )

    return st.recursive(units, extend, max_leaves=6).filter(lambda s: leaf_count(s) <= max_leaves)


def all_bits(n):
    return [tuple(bool(b) for b in bits) for bits in itertools.product((0, 1), repeat=n)]


_COMB = [g.GateKind.NOR, g.GateKind.NOT, g.GateKind.AND, g.GateKind.OR, g.GateKind.XOR, g.GateKind.MUX]


@st.composite
def circuits(draw, depth=3, allow_dff=False):
    """Random well-shaped circuits built from atoms, plugs, ser and par.

    Ser is made well-shaped by inserting a random rewire plug between the two
    halves, so every combinator and plug form gets exercised.
    """
    kinds = _COMB + ([g.GateKind.DFF] if allow_dff else [])
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        kind = draw(st.sampled_from(kinds))
        tags = draw(st.lists(st.sampled_from(TAGS), min_size=kind.arity + 1, max_size=kind.arity + 1))
        return g.gate(kind, *tags)
    op = draw(st.sampled_from(["ser", "par", "plug"]))
    a = draw(circuits(depth - 1, allow_dff))
    if op == "plug":
        return a | identity(a.output_shape)
    b = draw(circuits(depth - 1, allow_dff))
    if op == "par":
        return a & b
    n_out, n_in = leaf_count(a.output_shape), leaf_count(b.input_shape)
    table = draw(st.lists(st.integers(0, n_out - 1), min_size=n_in, max_size=n_in))
    return a | rewire(a.output_shape, b.input_shape, table) | b


@pytest.fixture(scope="session")
def warm_kernels():
    """Compile the JIT kernels once so timed tests measure checking, not compilation."""
    from hdlkernel.claims import run_claim

    run_claim("hadd_implements_hadd")
    run_claim("dff_implements_pre", T=4)
    from hdlkernel.analyses import critical_path
    from hdlkernel.generators import gen_hadd

    critical_path(gen_hadd())
