"""Command-line front end.

Exit status: 0 on success (a ``no-cycle`` answer is a success), 1 when
``verify`` rejects its input, 2 on malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from .core import (
    InstanceError,
    InstanceReader,
    format_instance,
    kappa,
    parse_rational,
    peek_terminals,
    read_instance,
)
from .cycle import CycleWitness, format_cycle, steiner_cycle
from .generate import GenParams, generate
from .greedy import CoverWitness, _natural, format_cover, steiner_path_cover
from .oracle import (
    OracleLimitError,
    brute_cycle_exists,
    brute_pi_s,
    verify_cover,
    verify_cover_witness,
    verify_cycle,
    verify_cycle_witness,
)
from .streaming import COVER, CYCLE, StreamOrderError, StreamState, play_level

__all__ = ["main", "run_cli"]


class UsageError(Exception):
    """Bad input that is not tied to an instance file line."""


def _solve_cover(args, out: TextIO) -> int:
    inst = read_instance(args.file)
    out.write(format_cover(steiner_path_cover(inst), inst))
    return 0


def _solve_cycle(args, out: TextIO) -> int:
    inst = read_instance(args.file)
    out.write(format_cycle(steiner_cycle(inst), inst))
    return 0


def _stream(args, out: TextIO) -> int:
    terminals = peek_terminals(args.file)
    state = StreamState(terminals, args.mode, args.kappa)
    with open(args.file, encoding="utf-8") as fh:
        for iv in InstanceReader(fh).intervals():
            for event in state.push(iv):
                out.write(f"{event}\n")
    before = len(state.events)
    result = state.finish()
    for event in state.events[before:]:
        out.write(f"{event}\n")
    if args.mode == COVER:
        out.write(f"witness cutset {' '.join(sorted(result.witness.cutset, key=_natural))}\n")
        out.write(f"witness s_islands {result.witness.s_island_count}\n")
    elif result.feasible:
        out.write("cycle " + " ".join(result.cycle) + "\n")
    else:
        out.write("no-cycle\n")
        if result.witness is not None:
            out.write(f"witness cutset {' '.join(sorted(result.witness.cutset, key=_natural))}\n")
    if args.stats:
        out.write(f"peak_buffer {state.peak_buffer}\nreads {state.reads}\n")
    return 0


def _oracle(args, out: TextIO) -> int:
    inst = read_instance(args.file)
    out.write(f"pi_s {brute_pi_s(inst)}\n")
    out.write(f"cycle {'yes' if brute_cycle_exists(inst) else 'no'}\n")
    return 0


def _parse_witness(text: str):
    """Split solver output into ``(paths, cycle, cutset, s_islands, islands)``."""
    paths, islands = [], []
    cycle = cutset = count = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        rec = raw.split()
        if not rec or rec[0].startswith("#") or rec == ["no-cycle"]:
            continue
        if rec[0] == "cycle":
            cycle = tuple(rec[1:])
        elif rec[0] == "island":
            islands.append(frozenset(rec[1:]))
        elif rec[0] == "witness" and len(rec) >= 2 and rec[1] == "cutset":
            cutset = frozenset(rec[2:])
        elif rec[0] == "witness" and len(rec) == 3 and rec[1] == "s_islands" and rec[2].isdigit():
            count = int(rec[2])
        elif rec[0] == "witness":
            raise UsageError(f"witness line {lineno}: unrecognised record")
        else:
            paths.append(tuple(rec))
    return paths, cycle, cutset, count, islands


def _verify(args, out: TextIO) -> int:
    inst = read_instance(args.file)
    paths, cycle, cutset, count, islands = _parse_witness(sys.stdin.read() if args.witness is None else _slurp(args.witness))
    if cycle is not None:
        ok = verify_cycle(inst, cycle)
    elif cutset is None:
        raise UsageError("no witness found on input")
    elif not cutset <= inst.index.keys():
        ok = False
    elif count is not None:
        claimed = len(paths) if paths else count - len(cutset)
        ok = verify_cover_witness(inst, claimed, CoverWitness(cutset, count))
        if paths:
            ok = ok and verify_cover(inst, paths)
    else:
        ok = verify_cycle_witness(inst, CycleWitness(cutset, tuple(islands)))
    out.write("valid\n" if ok else "invalid\n")
    return 0 if ok else 1


def _slurp(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _gen(args, out: TextIO) -> int:
    try:
        frac = parse_rational(args.terminals)
        params = GenParams(args.n, args.seed, args.range, args.max_len, frac)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = format_instance(generate(params))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def _play(args, out: TextIO) -> int:
    inst = read_instance(args.file)
    try:
        trace = play_level(inst)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for kind, ident in trace.forward_moves:
        out.write(f"{kind} {ident}\n")
    if trace.return_moves:
        out.write("return " + " ".join(trace.return_moves) + "\n")
    out.write(f"{trace.outcome}\n")
    return 0


def _kappa(args, out: TextIO) -> int:
    out.write(f"kappa {kappa(read_instance(args.file))}\n")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steiner-intervals", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        p.set_defaults(handler=handler)
        return p

    with_file("solve-cover", _solve_cover, "minimum Steiner path cover with witness")
    with_file("solve-cycle", _solve_cycle, "Steiner cycle or infeasibility witness")
    p = with_file("stream", _stream, "single-pass engine, events printed as decided")
    p.add_argument("--mode", choices=(COVER, CYCLE), default=COVER)
    p.add_argument("--kappa", type=int, default=None, help="known containment parameter")
    p.add_argument("--stats", action="store_true", help="append peak_buffer and reads")
    with_file("oracle", _oracle, "exact answers by brute force (small instances)")
    p = with_file("verify", _verify, "check a solver output or witness read from stdin")
    p.add_argument("--witness", default=None, help="read the witness from this file instead of stdin")
    p = sub.add_parser("gen", help="seeded random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--range", type=int, default=100)
    p.add_argument("--max-len", type=int, default=10)
    p.add_argument("--terminals", default="0.5", help="terminal fraction in (0, 1]")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=_gen)
    with_file("play", _play, "simulate the forward-and-back player")
    with_file("kappa", _kappa, "containment parameter")
    return parser


def run_cli(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args, out)
    except (InstanceError, StreamOrderError, UsageError, OracleLimitError) as exc:
        err.write(f"error: {exc}\n")
    except OSError as exc:
        err.write(f"error: {exc.filename or ''}: {exc.strerror or exc}\n")
    return 2


def main() -> None:
    sys.exit(run_cli())
