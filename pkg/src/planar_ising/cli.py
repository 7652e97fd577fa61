"""Command-line front end.

CSV goes to stdout (or ``--out``); summaries and diagnostics go to stderr.
Exit codes: 0 success, 1 identity failure, 2 input error, 3 capacity.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from .currents import all_connected, parallel_event, prob_parallel, sample_double_current, write_samples_csv
from .errors import CapacityError, PlanarIsingError
from .even import correlation
from .graph import PlanarGraph, load_graph
from .linalg import build_K, build_M, build_N
from .scaling import EPS_LADDER, SQUARE_K2_A, SQUARE_K2_B, RectDomain, convergence_study
from .verify import SUITES, VerifyConfig, checks_csv, run_suites

EXIT_OK, EXIT_IDENTITY, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


class InputError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated vertex ids, got {text!r}")


def _color_list(text: str) -> tuple[str, ...]:
    cols = tuple(t.strip() for t in text.split(","))
    if any(c not in ("o", "b") for c in cols):
        raise argparse.ArgumentTypeError("coloring entries must be 'o' or 'b'")
    return cols


def _eps_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(Fraction(t.strip())) for t in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad eps ladder {text!r}")


def _points(text: str) -> tuple[complex, ...]:
    try:
        out = []
        for pair in text.split(";"):
            x, y = pair.split(",")
            out.append(complex(float(x), float(y)))
        return tuple(out)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y;x,y', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planar-ising", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp):
        sp.add_argument("--graph", required=True, help="graph JSON file")
        sp.add_argument("--coloring", type=_color_list, help="boundary colors, e.g. o,b,o")
        sp.add_argument("--out", help="write CSV here instead of stdout")

    v = sub.add_parser("verify", help="run exact identity suites")
    graph_args(v)
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--k-max", type=int, default=3)

    c = sub.add_parser("compute", help="correlations, matrices, parallel-connection probability")
    graph_args(c)
    c.add_argument("what", choices=("corr", "matrix", "prob-parallel"))
    c.add_argument("kind", nargs="?", choices=("N", "M", "K"), help="matrix kind")
    c.add_argument("--A", type=_int_list, default=())
    c.add_argument("--B", type=_int_list, default=())

    s = sub.add_parser("sample", help="seeded double-current samples")
    graph_args(s)
    s.add_argument("--A", type=_int_list, default=())
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--mode", choices=("exact", "mcmc"), default="exact")

    sc = sub.add_parser("scaling", help="lattice vs continuum convergence table")
    sc.add_argument("--eps", type=_eps_list, default=EPS_LADDER)
    sc.add_argument("--width", type=float, default=1.0)
    sc.add_argument("--height", type=float, default=1.0)
    sc.add_argument("--points-a", type=_points, default=SQUARE_K2_A, help="'x,y;x,y' for a_1..a_k")
    sc.add_argument("--points-b", type=_points, default=SQUARE_K2_B, help="'x,y;x,y' for b_1..b_k")
    sc.add_argument("--out")
    return p


def _load(args) -> PlanarGraph:
    g = load_graph(args.graph)
    if args.coloring is not None:
        if len(args.coloring) != len(g.boundary):
            raise InputError(f"--coloring has {len(args.coloring)} entries, boundary has {len(g.boundary)}")
        g = g.with_coloring(args.coloring)
    return g


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    g = _load(args)
    suites = SUITES if args.suite == "all" else (args.suite,)
    cfg = VerifyConfig(k_max=args.k_max, suites=suites)
    checks = run_suites(g, cfg)
    _emit(checks_csv(checks), args.out)
    failed = [c for c in checks if not c.ok]
    for note in cfg.skipped:
        print(f"skipped {note}", file=sys.stderr)
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed", file=sys.stderr)
    for c in failed[:20]:
        print(f"FAIL [{c.suite}] {c.identity} {c.inputs}: {c.lhs} != {c.rhs}", file=sys.stderr)
    return EXIT_IDENTITY if failed else EXIT_OK


def cmd_compute(args) -> int:
    g = _load(args)
    if args.what == "corr":
        if len(args.A) != 1 or len(args.B) != 1:
            raise InputError("corr needs --A a --B b")
        _emit(f"{correlation(g, args.A[0], args.B[0])}\n", args.out)
    elif args.what == "matrix":
        if args.kind is None:
            raise InputError("matrix needs a kind: N, M or K")
        if args.kind == "N":
            m = build_N(g, args.A, args.B)
        elif args.kind == "M":
            m = build_M(g, args.A, args.B)
        else:
            m = build_K(g, set(args.A) | set(args.B))
        _emit(m.to_csv(), args.out)
    else:
        _emit(f"{prob_parallel(g, args.A, args.B)}\n", args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    g = _load(args)
    a = args.A
    samples = sample_double_current(g, a, args.samples, args.seed, mode=args.mode)
    events = []
    if len(a) == 4:
        p, q, r, s = sorted(a, key=g.boundary_index.__getitem__)
        events = [parallel_event((p, q), (s, r)), parallel_event((p, s), (q, r)), all_connected((p, q, r, s))]
    if args.out:
        write_samples_csv(args.out, g, samples, events)
    else:
        write_samples_csv(sys.stdout, g, samples, events)
    print(f"{len(samples)} samples, seed {args.seed}, mode {args.mode}", file=sys.stderr)
    return EXIT_OK


def cmd_scaling(args) -> int:
    d = RectDomain(args.width, args.height)
    table = convergence_study(d, args.points_a, args.points_b, args.eps)
    _emit(table.to_csv(), args.out)
    print(f"gap non-increasing: {table.non_increasing}", file=sys.stderr)
    return EXIT_OK if table.non_increasing else EXIT_IDENTITY


COMMANDS = {"verify": cmd_verify, "compute": cmd_compute, "sample": cmd_sample, "scaling": cmd_scaling}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (PlanarIsingError, InputError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
