"""Command line entry point: ``qse <subcommand> ...``.

Exit status is 0 on success, 1 when ``verify`` finds a mismatch and 2 on
usage, parse, missing-file or capacity errors.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from ..condlang import BranchTree, ParseError, parse_program, with_widths
from ..partition import (SynthesisError, histogram_csv, run_and_extract,
                         sample_histogram, simulate, verify_partition)
from ..qcore import CeilingError, FragmentError
from ..qsynth import LayoutError, compile_qse
from .corpus import division_count_report, format_division_table, load_manifest
from .oracle import brute_force_partition, compare_partitions
from .sweep import METHODS, coverage_sweep

__all__ = ["main", "build_parser"]


class _Usage(Exception):
    pass


def _widths(text: Optional[str]) -> Optional[dict[str, int]]:
    if not text:
        return None
    out = {}
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep or not value.strip().isdigit():
            raise _Usage(f"bad --widths entry {item!r}, expected name=bits")
        out[name.strip()] = int(value)
    return out


def _load(args) -> BranchTree:
    tree = parse_program(Path(args.file).read_text())
    widths = _widths(getattr(args, "widths", None))
    if widths:
        unknown = set(widths) - set(tree.names)
        if unknown:
            raise _Usage(f"--widths names undeclared variables: {sorted(unknown)}")
        tree = with_widths(tree, {**tree.widths, **widths})
    return tree


class _Clock:
    def __init__(self):
        self.marks: list[tuple[str, float]] = []
        self._t = time.perf_counter()

    def lap(self, stage: str) -> None:
        now = time.perf_counter()
        self.marks.append((stage, now - self._t))
        self._t = now

    def report(self) -> None:
        print("# " + ", ".join(f"{s} {t:.3f}s" for s, t in self.marks), file=sys.stderr)


def _cmd_compile(args) -> int:
    circuit = compile_qse(_load(args))
    sys.stdout.write(circuit.netlist())
    sys.stdout.write("# dictionary\n")
    sys.stdout.write(circuit.dictionary.to_text())
    return 0


def _cmd_run(args) -> int:
    clock = _Clock()
    circuit = compile_qse(_load(args))
    clock.lap("compile")
    state = simulate(circuit)
    clock.lap("simulate")
    part = run_and_extract(circuit, state)
    clock.lap("extract")
    if args.json:
        print(part.to_json())
    else:
        print(f"qubits {circuit.num_qubits} "
              + " ".join(f"{k}={v}" for k, v in circuit.layout.breakdown().items()))
        print(f"space {part.space_size}, coverage {part.covered_fraction():.4f}")
        for branch, cases in part.subsets.items():
            pats = "|".join(part.patterns.get(branch, ())) or "-"
            print(f"{branch} {pats} {len(cases)}: " + " ".join(str(tc) for tc in cases))
        print(f"partition check: {verify_partition(part, circuit.layout)}")
    if args.timing:
        clock.report()
    return 0


def _cmd_sample(args) -> int:
    if args.shots < 1:
        raise _Usage("--shots must be positive")
    circuit = compile_qse(_load(args))
    sys.stdout.write(histogram_csv(sample_histogram(circuit, args.shots, args.seed)))
    return 0


def _cmd_verify(args) -> int:
    tree = _load(args)
    clock = _Clock()
    quantum = run_and_extract(compile_qse(tree))
    clock.lap("quantum")
    classical = brute_force_partition(tree)
    clock.lap("oracle")
    report = compare_partitions(quantum, classical)
    print(report)
    if args.timing:
        clock.report()
    return 0 if report.passed else 1


def _cmd_sweep(args) -> int:
    if args.max_width < 1:
        raise _Usage("--max-width must be positive")
    curve = coverage_sweep(_load(args), args.max_width, method=args.method)
    sys.stdout.write(str(curve))
    return 0


def _cmd_bench(args) -> int:
    corpus = load_manifest(args.manifest)
    sys.stdout.write(format_division_table(division_count_report(corpus)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(name, help_, fn):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file", help="program in the condition language")
        p.add_argument("--widths", help="override widths, e.g. x=3,y=2")
        p.set_defaults(fn=fn)
        return p

    with_file("compile", "print the gate netlist and flag dictionary", _cmd_compile)
    p = with_file("run", "simulate and print the test-case partition", _cmd_run)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--timing", action="store_true", help="stage wall-clock on stderr")
    p = with_file("sample", "sample a measurement histogram as CSV", _cmd_sample)
    p.add_argument("--shots", type=int, default=8192)
    p.add_argument("--seed", type=int, default=0)
    p = with_file("verify", "compare against the classical oracle", _cmd_verify)
    p.add_argument("--timing", action="store_true", help="stage wall-clock on stderr")
    p = with_file("sweep", "branch coverage against uniform width", _cmd_sweep)
    p.add_argument("--max-width", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="auto")
    p = sub.add_parser("bench", help="corpus path and division counts")
    p.add_argument("--manifest", help="manifest JSON (default: bundled corpus)")
    p.set_defaults(fn=_cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
    except (OSError, _Usage, LayoutError, CeilingError, ValueError) as exc:
        print(f"qse {args.command}: {exc}", file=sys.stderr)
    except (SynthesisError, FragmentError) as exc:
        print(f"qse {args.command}: internal error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
