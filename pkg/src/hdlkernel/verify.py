"""Executable correctness claims: exhaustive or sampled equivalence up to codecs.

A check either enumerates the whole decoded input domain (``EXHAUSTIVE``) or
draws a seeded sample (``Sampled(count, seed)``); sampling is at the bit level,
one independent uniform bit per wire per tick.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Union

import numpy as np

from .circuit import Circuit
from .codec import BitsCodec, Codec, TraceCodec
from .errors import DomainTooLarge, LengthMismatch
from .gates import expand_to_nor
from .semantics import (
    compile_netlist,
    elaborate,
    eval_many,
    lift_combinational,
    require_delay_free,
    sim_many,
)
from .shape import leaf_count, require_equal

MAX_EXHAUSTIVE = 2**24
DEFAULT_T = 64


@dataclass(frozen=True)
class Exhaustive:
    def __str__(self):
        return "exhaustive"


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int = 0

    def __str__(self):
        return f"sample:{self.count} seed={self.seed}"


EXHAUSTIVE = Exhaustive()
Mode = Union[Exhaustive, Sampled]


def parse_mode(text: str, seed: int = 0) -> Mode:
    """``"exhaustive"`` or ``"sample:N"``."""
    if text == "exhaustive":
        return EXHAUSTIVE
    if text.startswith("sample:") and text[7:].isdigit() and int(text[7:]) > 0:
        return Sampled(int(text[7:]), seed)
    raise ValueError(f"mode must be 'exhaustive' or 'sample:N', got {text!r}")


@dataclass
class CheckReport:
    claim: str
    mode: Mode
    total: int
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def verdict(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = {
            "claim": self.claim,
            "mode": "exhaustive" if isinstance(self.mode, Exhaustive) else "sampled",
            "total": self.total,
            "verdict": self.verdict,
            "failures": [
                {"input": repr(i), "expected": repr(e), "actual": repr(a)} for i, e, a in self.failures
            ],
        }
        if isinstance(self.mode, Sampled):
            d["count"] = self.mode.count
            d["seed"] = self.mode.seed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def render(self, max_failures: int = 5) -> str:
        status = "PASS" if self.verdict else "FAIL"
        lines = [f"{status} {self.claim}: {self.total} cases ({self.mode})"]
        for i, e, a in self.failures[:max_failures]:
            lines.append(f"  input={i!r} expected={e!r} actual={a!r}")
        if len(self.failures) > max_failures:
            lines.append(f"  ... {len(self.failures) - max_failures} more failures")
        return "\n".join(lines)

    def __str__(self):
        return self.render()


def _bit_matrix(n_cases: int, width: int) -> np.ndarray:
    """Row r holds the bits of r, LSB in column 0."""
    r = np.arange(n_cases, dtype=np.int64)[:, None]
    return ((r >> np.arange(width, dtype=np.int64)) & 1).astype(np.uint8)


def _input_rows(codec: Codec, mode: Mode) -> np.ndarray:
    if isinstance(mode, Exhaustive):
        if codec.cardinality > MAX_EXHAUSTIVE:
            raise DomainTooLarge(f"{codec.cardinality} cases exceed the exhaustive limit {MAX_EXHAUSTIVE}")
        if codec.cardinality == 2**codec.width:
            return _bit_matrix(codec.cardinality, codec.width)
        return np.array([codec.encode_values(v) for v in codec.domain()], dtype=np.uint8).reshape(-1, codec.width)
    rng = np.random.default_rng(mode.seed)
    return rng.integers(0, 2, size=(mode.count, codec.width), dtype=np.uint8)


def _sort_failures(failures: list) -> list:
    return sorted(failures, key=lambda f: f[0])


def check_implements(
    c: Circuit,
    in_codec: Codec,
    out_codec: Codec,
    f: Callable[[Any], Any],
    mode: Mode = EXHAUSTIVE,
    name: Optional[str] = None,
) -> CheckReport:
    """``out_codec.decode(eval(c, in_codec.encode(v))) == f(v)`` over the domain."""
    require_equal(c.input_shape, in_codec.shape, "input codec")
    require_equal(c.output_shape, out_codec.shape, "output codec")
    require_delay_free(c)
    rows = _input_rows(in_codec, mode)
    outs = eval_many(c, rows).astype(bool)
    failures = []
    for row, out in zip(rows.astype(bool), outs):
        v = in_codec.decode_values(row)
        expected = f(v)
        actual = out_codec.decode_values(out)
        if actual != expected:
            failures.append((tuple(row), v, expected, actual))
    failures = [(v, e, a) for _, v, e, a in sorted(failures, key=lambda x: x[0])]
    return CheckReport(name or "implements", mode, len(rows), failures)


def _random_traces(n_wires: int, T: int, mode: Mode) -> np.ndarray:
    """(T, n_wires, batch) independent uniform bits."""
    rng = np.random.default_rng(mode.seed)
    return rng.integers(0, 2, size=(T, n_wires, mode.count), dtype=np.uint8)


def _decode_traces(codec: Codec, arr: np.ndarray, i: int):
    """Decode sample ``i`` of a (T, wires, batch) array with a trace codec."""
    return codec.decode_values(tuple(tuple(bool(x) for x in arr[:, w, i]) for w in range(arr.shape[1])))


def check_realise_trace(
    c: Circuit,
    in_codec: TraceCodec,
    out_codec: TraceCodec,
    relation: Callable[[Any, Any], bool],
    traces: Mode = Sampled(1000, 0),
    name: Optional[str] = None,
) -> CheckReport:
    """``relation(decoded inputs, decoded simulated outputs)`` on sampled traces."""
    require_equal(c.input_shape, in_codec.shape, "input codec")
    require_equal(c.output_shape, out_codec.shape, "output codec")
    if in_codec.T != out_codec.T:
        raise LengthMismatch("input and output trace codecs disagree on T")
    compile_netlist(elaborate(c))
    T = in_codec.T
    if isinstance(traces, Exhaustive):
        if in_codec.cardinality > MAX_EXHAUSTIVE:
            raise DomainTooLarge(f"{in_codec.cardinality} traces exceed the exhaustive limit")
        vals = [in_codec.encode_values(v) for v in in_codec.domain()]
        arr = np.array(vals, dtype=np.uint8).reshape(len(vals), in_codec.width, T).transpose(2, 1, 0)
    else:
        arr = _random_traces(in_codec.width, T, traces)
    out = sim_many(c, arr)
    failures = []
    for i in range(arr.shape[2]):
        ins = _decode_traces(in_codec, arr, i)
        outs = _decode_traces(out_codec, out, i)
        if not relation(ins, outs):
            failures.append((ins, "relation holds", outs))
    return CheckReport(name or "realise", traces, arr.shape[2], failures)


def check_lift(
    c: Circuit,
    f: Callable[[Any], Any],
    in_codec: Codec,
    out_codec: Codec,
    samples: Sampled = Sampled(100, 0),
    T: int = 32,
    name: Optional[str] = None,
) -> CheckReport:
    """Clocked simulation of a delay-free circuit equals ``f`` applied tick by tick."""
    require_delay_free(c)
    lift_combinational(c)
    require_equal(c.input_shape, in_codec.shape, "input codec")
    require_equal(c.output_shape, out_codec.shape, "output codec")
    arr = _random_traces(in_codec.width, T, samples)
    out = sim_many(c, arr)
    failures = []
    for i in range(samples.count):
        ins = tuple(in_codec.decode_values(arr[t, :, i].astype(bool)) for t in range(T))
        got = tuple(out_codec.decode_values(out[t, :, i].astype(bool)) for t in range(T))
        want = tuple(f(v) for v in ins)
        if got != want:
            failures.append((ins, want, got))
    return CheckReport(name or "lift", samples, samples.count, _sort_failures(failures))


def check_equivalent(
    c: Circuit,
    d: Circuit,
    mode: Optional[Mode] = None,
    name: Optional[str] = None,
) -> CheckReport:
    """Two delay-free circuits with one interface compute the same bits.

    Exhaustive up to 20 input wires unless a mode is given.
    """
    require_equal(c.input_shape, d.input_shape, "equivalence inputs")
    require_equal(c.output_shape, d.output_shape, "equivalence outputs")
    require_delay_free(c)
    require_delay_free(d)
    n = leaf_count(c.input_shape)
    if mode is None:
        mode = EXHAUSTIVE if n <= 20 else Sampled(4096, 0)
    rows = _input_rows(BitsCodec(c.input_shape), mode)
    want = eval_many(c, rows)
    got = eval_many(d, rows)
    bad = np.nonzero((want != got).any(axis=1))[0]
    failures = [
        (tuple(bool(x) for x in rows[i]), tuple(bool(x) for x in want[i]), tuple(bool(x) for x in got[i]))
        for i in bad
    ]
    return CheckReport(name or "equivalent", mode, len(rows), _sort_failures(failures))


def check_nor_equiv(c: Circuit, mode: Optional[Mode] = None, name: Optional[str] = None) -> CheckReport:
    """``c`` and ``expand_to_nor(c)`` agree; exhaustive up to 20 input wires."""
    require_delay_free(c)
    return check_equivalent(c, expand_to_nor(c), mode, name or "nor_equiv")
