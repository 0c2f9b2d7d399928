"""Command-line front end: ``hdlkernel {list,gen,sim,check,stats,export}``.

Exit codes: 0 success, 1 claim refuted, 2 usage error, 3 semantic error
(combinational loop, delay in a delay-free context).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

import numpy as np

from . import analyses
from .claims import CLAIMS, run_claim
from .errors import CircuitError, CombinationalLoop, HasDelay, ParseError
from .generators import GENERATORS
from .semantics import Netlist, compile_netlist, elaborate, eval_many, sim_many
from .verify import parse_mode

SPEC_HELP = """\
input SPEC: comma-separated tag=value pairs, one per input tag.
  value is 0, 1, a decimal word, or trace:BITS.
  A word spreads over the tag's wires LSB first (a=9 on 4 wires is 1,0,0,1).
  trace:101 drives a 1-wire tag with 1,0,1 on ticks 0,1,2; for a wider tag
  separate per-tick words with '/', e.g. x=trace:3/0/2.
  Traces shorter than --ticks are padded with zeros; constants hold on every tick.
"""


class UsageError(Exception):
    pass


def _params(pairs) -> dict:
    out = {}
    for p in pairs or ():
        if "=" not in p:
            raise UsageError(f"--param expects k=v, got {p!r}")
        k, v = p.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load_target(target: str, params: dict) -> Netlist:
    """A netlist file path or a registered generator name."""
    if target in GENERATORS:
        try:
            c = GENERATORS[target].instantiate(**params)
        except ValueError as e:
            raise UsageError(str(e)) from None
        return elaborate(c)
    if os.path.isfile(target):
        if params:
            raise UsageError("--param only applies to generators")
        with open(target, encoding="utf-8") as fh:
            return analyses.from_netlist_file(fh.read())
    raise UsageError(f"unknown generator or missing file: {target!r}")


def _groups(ports) -> dict:
    """tag -> port positions, tags in order of first appearance."""
    g: dict = {}
    for i, p in enumerate(ports):
        g.setdefault(p.tag, []).append(i)
    return g


def _word_bits(text: str, width: int, tag: str) -> list:
    if not text.isdigit():
        raise UsageError(f"{tag}: expected 0, 1 or a decimal word, got {text!r}")
    v = int(text)
    if v >= 1 << width:
        raise UsageError(f"{tag}: {v} does not fit in {width} wire(s)")
    return [(v >> i) & 1 for i in range(width)]


def parse_inputs(spec: str, nl: Netlist) -> tuple:
    """Returns ({tag: per-tick bit lists or a single bit list}, has_trace)."""
    groups = _groups(nl.inputs)
    values: dict = {}
    is_trace = False
    for item in filter(None, (s.strip() for s in spec.split(","))):
        if "=" not in item:
            raise UsageError(f"malformed input {item!r}; expected tag=value")
        tag, val = (s.strip() for s in item.split("=", 1))
        if tag not in groups:
            raise UsageError(f"no input tagged {tag!r}; inputs are {', '.join(groups)}")
        if tag in values:
            raise UsageError(f"input {tag!r} given twice")
        width = len(groups[tag])
        if val.startswith("trace:"):
            body = val[6:]
            if width == 1 and "/" not in body:
                if not body or set(body) - {"0", "1"}:
                    raise UsageError(f"{tag}: trace bits must be 0/1, got {body!r}")
                ticks = [[int(ch)] for ch in body]
            else:
                ticks = [_word_bits(w, width, tag) for w in body.split("/")]
            values[tag] = ("trace", ticks)
            is_trace = True
        else:
            values[tag] = ("const", _word_bits(val, width, tag))
    missing = [t for t in groups if t not in values]
    if missing:
        raise UsageError(f"missing input(s): {', '.join(missing)}")
    return values, is_trace


def _fmt_word(bits) -> str:
    return str(sum(int(b) << i for i, b in enumerate(bits)))


def format_outputs(nl: Netlist, row) -> str:
    return " ".join(f"{tag}={_fmt_word([row[i] for i in idx])}" for tag, idx in _groups(nl.outputs).items())


def format_traces(nl: Netlist, out: np.ndarray) -> str:
    """``out`` is (T, n_out); one ``tag=trace:...`` per output tag."""
    parts = []
    for tag, idx in _groups(nl.outputs).items():
        words = [_fmt_word(out[t, idx]) for t in range(out.shape[0])]
        sep = "" if len(idx) == 1 else "/"
        parts.append(f"{tag}=trace:{sep.join(words)}")
    return " ".join(parts)


def simulate(nl: Netlist, spec: str, ticks: Optional[int] = None) -> str:
    values, is_trace = parse_inputs(spec, nl)
    compile_netlist(nl)
    groups = _groups(nl.inputs)
    if not is_trace and not nl.has_dff and ticks is None:
        row = np.zeros((1, len(nl.inputs)), dtype=np.uint8)
        for tag, (_, bits) in values.items():
            row[0, groups[tag]] = bits
        return format_outputs(nl, eval_many(nl, row)[0])
    longest = max((len(v) for kind, v in values.values() if kind == "trace"), default=1)
    T = ticks if ticks is not None else longest
    if longest > T:
        raise UsageError(f"a trace has {longest} ticks but --ticks is {T}")
    arr = np.zeros((T, len(nl.inputs), 1), dtype=np.uint8)
    for tag, (kind, v) in values.items():
        if kind == "const":
            arr[:, groups[tag], 0] = v
        else:
            for t, bits in enumerate(v):
                arr[t, groups[tag], 0] = bits
    return format_traces(nl, sim_many(nl, arr)[:, :, 0])


def interface_summary(nl: Netlist) -> str:
    def side(ports):
        g = _groups(ports)
        return f"{len(ports)} ({' '.join(f'{t}:{len(i)}' for t, i in g.items())})"

    counts = " ".join(f"{k.name}:{v}" for k, v in analyses.gate_count(nl).items())
    return f"inputs: {side(nl.inputs)}\noutputs: {side(nl.outputs)}\ngates: {counts or 'none'}"


def stats_line(nl: Netlist) -> str:
    counts = [f"{k.name}:{v}" for k, v in analyses.gate_count(nl).items()]
    return " ".join(counts + [f"depth:{analyses.critical_path(nl)}"])


# ---------------------------------------------------------------------------


def cmd_list(args) -> int:
    print("generators:")
    for g in GENERATORS.values():
        params = " ".join(f"{k}={d}" for k, (_, d) in g.schema().items())
        print(f"  {g.name:10s} {g.doc}" + (f"  [{params}]" if params else ""))
    print("claims:")
    for c in CLAIMS.values():
        params = " ".join(f"{p.name}={p.default}" for p in c.params)
        print(f"  {c.name:28s} {c.label}" + (f"  [{params}]" if params else ""))
    return 0


def cmd_gen(args) -> int:
    if args.generator not in GENERATORS:
        raise UsageError(f"unknown generator {args.generator!r}")
    nl = load_target(args.generator, _params(args.param))
    print(interface_summary(nl))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(analyses.to_netlist_file(nl))
        print(f"wrote {args.out}")
    return 0


def cmd_sim(args) -> int:
    nl = load_target(args.target, _params(args.param))
    if args.ticks is not None and args.ticks < 1:
        raise UsageError("--ticks must be positive")
    print(simulate(nl, args.inputs, args.ticks))
    return 0


def cmd_check(args) -> int:
    if args.claim not in CLAIMS:
        raise UsageError(f"unknown claim {args.claim!r}")
    mode = None
    if args.mode:
        try:
            mode = parse_mode(args.mode, args.seed or 0)
        except ValueError as e:
            raise UsageError(str(e)) from None
    try:
        report = run_claim(args.claim, mode=mode, seed=args.seed, **_params(args.param))
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.format == "text":
        print(report.render())
    else:
        text = report.to_json()
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
            print(report.render().splitlines()[0])
        else:
            print(text)
    return 0 if report.verdict else 1


def cmd_stats(args) -> int:
    print(stats_line(load_target(args.target, _params(args.param))))
    return 0


def cmd_export(args) -> int:
    nl = load_target(args.target, _params(args.param))
    text = analyses.to_dot(nl, args.target if args.target in GENERATORS else "circuit") if args.format == "dot" else analyses.to_netlist_file(nl)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hdlkernel", description="Structural circuit generators, simulation and checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_params(p):
        p.add_argument("--param", action="append", metavar="K=V", help="generator/claim parameter (repeatable)")

    sub.add_parser("list", help="list generators and claims").set_defaults(func=cmd_list)

    p = sub.add_parser("gen", help="elaborate a generator and write its netlist")
    p.add_argument("generator")
    with_params(p)
    p.add_argument("--out", help="netlist file to write")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser(
        "sim", help="simulate a netlist file or generator", epilog=SPEC_HELP, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    p.add_argument("target", help="netlist file or generator name")
    with_params(p)
    p.add_argument("--inputs", required=True, metavar="SPEC")
    p.add_argument("--ticks", type=int)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("check", help="run a named correctness claim")
    p.add_argument("claim")
    with_params(p)
    p.add_argument("--mode", help="exhaustive or sample:N")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("text", "file"), default="text", help="file: JSON report (to --out or stdout)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("stats", help="gate counts and critical path")
    p.add_argument("target")
    with_params(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export", help="write DOT or netlist text")
    p.add_argument("format", choices=("dot", "nl"))
    p.add_argument("target")
    with_params(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (CombinationalLoop, HasDelay) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3
    except CircuitError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
