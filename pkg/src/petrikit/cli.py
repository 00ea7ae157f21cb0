"""Command-line surface.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 semantic error
(enabling, composition, sorts, structure), 4 cap exceeded. All output
is byte-deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import IO, Sequence

from . import algebra, concurrency, dot
from .composition import compose_chain
from .errors import CapacityError, ParseError, PetrikitError
from .examples import EXAMPLE_NAMES, example_files
from .hlnet import (
    Mode,
    expand,
    hl_fire,
    hl_modes,
    initial_marking,
    place_tokens,
    render_value,
)
from .multiset import Multiset
from .net import fire_sequence, marking_graph
from .runs import linearizations, unfold
from .textio import (
    parse_assignments,
    parse_hlnet,
    parse_module,
    parse_steps,
    serialize_module,
    serialize_net,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for parse errors
        raise _UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc), path) from None


def _split_seq(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _parse_init(items: str) -> Multiset:
    counts: dict[str, int] = {}
    for item in _split_seq(items):
        if "=" in item:
            place, _, num = item.partition("=")
            counts[place.strip()] = counts.get(place.strip(), 0) + int(num)
        else:
            counts[item] = counts.get(item, 0) + 1
    return Multiset(counts)


def _build_parser() -> _Parser:
    parser = _Parser(prog="petrikit", description="Petri net toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("show", help="render a net file as DOT")
    p.add_argument("file")

    p = sub.add_parser("fire", help="fire a transition sequence, print the trace")
    p.add_argument("file")
    p.add_argument("--seq", required=True, help="comma-separated transition ids")

    p = sub.add_parser("graph", help="build the marking graph")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=10000)
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("unfold", help="unfold a firing sequence into a run (DOT)")
    p.add_argument("file")
    p.add_argument("--seq", required=True)

    p = sub.add_parser("invariants", help="print a place-invariant basis")
    p.add_argument("file")

    p = sub.add_parser("check-invariant", help="check constancy of a weighting along a trace")
    p.add_argument("file")
    p.add_argument("--weights", required=True, help="e.g. 'eating(p1)=2,forks(f1)=1'")
    p.add_argument("--seq", default="")

    p = sub.add_parser("compose", help="compose module files left to right")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("synthesize", help="merge a steps file into a net")
    p.add_argument("file")
    p.add_argument("--name", default=None)
    p.add_argument("--init", default="", help="initial marking, e.g. 'light-off,fan-off'")

    p = sub.add_parser("co", help="concurrency structure over an unfolded run")
    p.add_argument("file")
    p.add_argument("--seq", default=None, help="one round (default: all transitions in order)")
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("linearize", help="enumerate interleavings of an unfolded run")
    p.add_argument("file")
    p.add_argument("--seq", required=True)
    p.add_argument("--cap", type=int, default=1000)

    hl = sub.add_parser("hl", help="predicate/transition net commands")
    hlsub = hl.add_subparsers(dest="hl_command", required=True)

    p = hlsub.add_parser("modes", help="enabled modes of a transition at the initial marking")
    p.add_argument("file")
    p.add_argument("--trans", required=True)
    p.add_argument("--cap", type=int, default=1000)

    p = hlsub.add_parser("fire", help="fire one transition mode from the initial marking")
    p.add_argument("file")
    p.add_argument("--trans", required=True)
    p.add_argument("--mode", default="", help="e.g. 'x=p1' or 'x=p1,Y={f1,f2}'")

    p = hlsub.add_parser("expand", help="expand to an elementary net file")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=100000)

    p = sub.add_parser("examples", help="emit bundled example files")
    p.add_argument("name", nargs="?", choices=EXAMPLE_NAMES + ("list",), default="list")
    p.add_argument("--dir", default=".")
    p.add_argument("--n", type=int, default=5, help="philosophers for the dining example")
    p.add_argument("--variant", default="basic", choices=("basic", "shared-sets", "free-sets"))

    return parser


def _cmd_show(args, out: IO[str]):
    module = parse_module(_read(args.file), args.file)
    out.write(dot.net_dot(module.net, module.initial))


def _cmd_fire(args, out: IO[str]):
    module = parse_module(_read(args.file), args.file)
    trace = fire_sequence(module.net, module.initial, _split_seq(args.seq))
    for m in trace:
        out.write(dot.render_marking(m) + "\n")


def _cmd_graph(args, out: IO[str]):
    module = parse_module(_read(args.file), args.file)
    graph = marking_graph(module.net, module.initial, args.cap)
    if args.dot:
        out.write(dot.marking_graph_dot(graph))
        return
    out.write(f"nodes: {len(graph.nodes)}\n")
    out.write(f"edges: {len(graph.edges)}\n")
    out.write(f"truncated: {'true' if graph.truncated else 'false'}\n")
    index = {m: i for i, m in enumerate(graph.nodes)}
    for i, m in enumerate(graph.nodes):
        out.write(f"n{i}: {dot.render_marking(m)}\n")
    for step in graph.edges:
        out.write(f"n{index[step.source]} -{step.transition}-> n{index[step.target]}\n")


def _cmd_unfold(args, out: IO[str]):
    module = parse_module(_read(args.file), args.file)
    run = unfold(module.net, module.initial, _split_seq(args.seq))
    out.write(dot.run_dot(run))


def _cmd_invariants(args, out: IO[str]):
    module = parse_module(_read(args.file), args.file)
    for vec in algebra.place_invariants(module.net):
        out.write(vec.render() + "\n")


def _cmd_check_invariant(args, out: IO[str]):
    module = parse_module(_read(args.file), args.file)
    weights: dict[str, int] = {}
    for item in _split_seq(args.weights):
        place, _, num = item.rpartition("=")
        if not place:
            raise _UsageError(f"--weights entries need 'place=weight', got {item!r}")
        weights[place.strip()] = int(num)
    coeffs = tuple(weights.get(p, 0) for p in module.net.places)
    vec = algebra.InvariantVector(module.net.places, coeffs)
    trace = fire_sequence(module.net, module.initial, _split_seq(args.seq))
    values = sorted({vec.value(m) for m in trace})
    if len(values) == 1:
        out.write(f"constant: {values[0]}\n")
    else:
        out.write("not constant: " + " ".join(map(str, values)) + "\n")


def _cmd_compose(args, out: IO[str]):
    modules = [parse_module(_read(f), f) for f in args.files]
    out.write(serialize_module(compose_chain(modules)))


def _cmd_synthesize(args, out: IO[str]):
    from .synthesis import synthesize

    name, steps = parse_steps(_read(args.file), args.file)
    net = synthesize(steps, args.name or name)
    initial = _parse_init(args.init)
    net.check_marking(initial)
    out.write(serialize_net(net, initial))


def _cmd_co(args, out: IO[str]):
    module = parse_module(_read(args.file), args.file)
    round_seq = (
        _split_seq(args.seq) if args.seq is not None else list(module.net.transitions)
    )
    run = unfold(module.net, module.initial, round_seq * args.rounds)
    structure = concurrency.concurrency_structure(module.net, run)
    if args.dot:
        out.write(dot.structure_dot(module.net, structure))
        return
    for x, y in structure.links:
        out.write(f"co {x} {y}\n")
    connected = concurrency.is_connected(structure)
    out.write(f"connected: {'true' if connected else 'false'}\n")


def _cmd_linearize(args, out: IO[str]):
    module = parse_module(_read(args.file), args.file)
    run = unfold(module.net, module.initial, _split_seq(args.seq))
    seqs, truncated = linearizations(run, args.cap)
    for seq in seqs:
        out.write(", ".join(run.ev_label[e] for e in seq) + "\n")
    out.write(f"count: {len(seqs)}\n")
    out.write(f"truncated: {'true' if truncated else 'false'}\n")


def _mode_for(net, trans: str, text: str) -> Mode:
    bound = dict(parse_assignments(text))
    decls = net.transition(trans).variables
    missing = [v.name for v in decls if v.name not in bound]
    if missing:
        raise _UsageError(f"--mode leaves variables unbound: {', '.join(missing)}")
    extra = [name for name in bound if all(v.name != name for v in decls)]
    if extra:
        raise _UsageError(f"--mode binds unknown variables: {', '.join(extra)}")
    return Mode(tuple((v.name, bound[v.name]) for v in decls))


def _cmd_hl_modes(args, out: IO[str]):
    net, interp = parse_hlnet(_read(args.file), args.file)
    m = initial_marking(net, interp)
    modes, truncated = hl_modes(net, interp, m, args.trans, args.cap)
    for mode in modes:
        if mode.assignment:
            out.write(
                ", ".join(f"{v}={render_value(val, interp)}" for v, val in mode.assignment)
                + "\n"
            )
        else:
            out.write("()\n")
    out.write(f"count: {len(modes)}\n")
    out.write(f"truncated: {'true' if truncated else 'false'}\n")


def _cmd_hl_fire(args, out: IO[str]):
    net, interp = parse_hlnet(_read(args.file), args.file)
    m = initial_marking(net, interp)
    mode = _mode_for(net, args.trans, args.mode)
    result = hl_fire(net, interp, m, args.trans, mode)
    for place in net.places:
        tokens = place_tokens(result, place.name)
        values = sorted(tokens.elements(), key=interp.value_key)
        rendered = ", ".join(render_value(v, interp) for v in values)
        out.write(f"{place.name}: {rendered}\n")


def _cmd_hl_expand(args, out: IO[str]):
    net, interp = parse_hlnet(_read(args.file), args.file)
    expansion = expand(net, interp, args.cap)
    out.write(serialize_net(expansion.net, expansion.initial))


def _cmd_examples(args, out: IO[str]):
    if args.name == "list":
        for name in EXAMPLE_NAMES:
            out.write(name + "\n")
        return
    files = example_files(args.name, n=args.n, variant=args.variant)
    target = Path(args.dir)
    target.mkdir(parents=True, exist_ok=True)
    for filename in sorted(files):
        path = target / filename
        path.write_text(files[filename], encoding="utf-8")
        out.write(f"wrote {path}\n")


_COMMANDS = {
    "show": _cmd_show,
    "fire": _cmd_fire,
    "graph": _cmd_graph,
    "unfold": _cmd_unfold,
    "invariants": _cmd_invariants,
    "check-invariant": _cmd_check_invariant,
    "compose": _cmd_compose,
    "synthesize": _cmd_synthesize,
    "co": _cmd_co,
    "linearize": _cmd_linearize,
    "examples": _cmd_examples,
}

_HL_COMMANDS = {
    "modes": _cmd_hl_modes,
    "fire": _cmd_hl_fire,
    "expand": _cmd_hl_expand,
}


def main(
    argv: Sequence[str] | None = None,
    stdout: IO[str] | None = None,
    stderr: IO[str] | None = None,
) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "hl":
            _HL_COMMANDS[args.hl_command](args, out)
        else:
            _COMMANDS[args.command](args, out)
        return 0
    except _UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 1
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return 2
    except CapacityError as exc:
        err.write(f"cap exceeded: {exc}\n")
        return 4
    except (PetrikitError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
