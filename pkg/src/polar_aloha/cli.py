"""Command line front end: ``polar-aloha <subcommand> ...``.

Every subcommand writes CSV to stdout or to ``--out``.  Exit status is 0 on
success, 1 on bad input and 2 on runtime failure.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import sys
from typing import Sequence

import numpy as np

from . import analysis, irsa
from .channel import SlotFrame, erase_words, polar_transform
from .decoder import psc_decode
from .metrics import capacity_order, compute_metrics
from .rng import erasure_uniforms, random_payloads
from .sim import ConfigError, SimConfig, run_sweep, write_csv
from .spa import spa_v, write_spa_table

EXIT_OK, EXIT_BAD_INPUT, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_INPUT, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _users(args) -> list[int]:
    if (args.M is None) == (args.G is None):
        raise ConfigError("give exactly one of --M or --G")
    if args.M is not None:
        return args.M
    return [int(np.floor(G * args.N + 0.5)) for G in args.G]


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_construct(args) -> None:
    metrics = compute_metrics(args.N, args.epsilon, args.r)
    order = capacity_order(metrics)
    info = set(order[: args.M]) if args.M else set()
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["rank", "index", "I", "Z"] + (["info"] if args.M else []))
        for rank, idx in enumerate(order, start=1):
            row = [rank, idx, repr(metrics.capacity(idx)), repr(metrics.bhattacharyya(idx))]
            if args.M:
                row.append(int(idx in info))
            w.writerow(row)


def cmd_table(args) -> None:
    write_spa_table(args.out, args.N, args.design_epsilon)


def cmd_simulate(args) -> None:
    if args.config:
        config = SimConfig.from_json(args.config)
    else:
        if args.N is None or args.epsilon is None:
            raise ConfigError("simulate needs --config or at least --N and --epsilon")
        config = SimConfig(
            N=args.N, epsilons=args.epsilon, users=args.M, loads=args.G, r=args.r,
            decoder=args.decoder, L=args.L, spa_mode=args.spa_mode, spa_table=args.spa_table,
            trials=args.trials, seed=args.seed, workers=args.workers,
        )
    out_path = args.out or config.output
    results = run_sweep(config)
    with _output(out_path) as out:
        write_csv(results, out)


def cmd_bounds(args) -> None:
    users = _users(args)
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["epsilon", "N", "M", "G", "T_lower", "T_upper"])
        for eps in args.epsilon:
            for M in users:
                b = analysis.throughput_bounds(M, args.N, eps, args.r)
                w.writerow([repr(eps), args.N, M, repr(b.G), repr(b.lower), repr(b.upper)])


def cmd_baseline(args) -> None:
    dist = irsa.DegreeDistribution.parse(args.dist)
    users = _users(args)
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["epsilon", "N", "M", "G", "dist", "collisions", "trials", "recovered", "T"])
        for eps in args.epsilon:
            for M in users:
                recovered = sum(irsa.irsa_trial(M, args.N, dist, eps, args.seed, t)
                                for t in range(args.trials))
                w.writerow([repr(eps), args.N, M, repr(M / args.N), str(dist), "destructive",
                            args.trials, recovered, repr(recovered / (args.N * args.trials))])


def cmd_decode(args) -> None:
    """Encode, transmit and pSC-decode one frame, dumping the lattice."""
    if not args.trace:
        raise ConfigError("decode currently only supports --trace")
    assignment = spa_v(args.M, args.N, args.epsilon, args.r)
    info = random_payloads(args.seed, args.trial, args.M, args.r)
    source = np.zeros(args.N, dtype=np.uint64)
    source[assignment.user_rows] = info
    erased = erasure_uniforms(args.seed, args.trial, args.N) < args.epsilon
    yv, yk = erase_words(polar_transform(source), erased, args.r)
    frame = SlotFrame.from_words(yv, yk, args.r)
    result = psc_decode(frame, assignment.info_set, args.r)
    lat = result.lattice
    digits = max(1, (args.r + 3) // 4)
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["column", "row", "Q_value", "Q_known", "U_value", "source", "info"])
        for j in range(lat.Qv.shape[0] - 1, -1, -1):
            for i in range(args.N):
                w.writerow([j, i + 1, f"{int(lat.Qv[j, i]):0{digits}x}",
                            f"{int(lat.Qk[j, i]):0{digits}x}", f"{int(lat.Uv[j, i]):0{digits}x}",
                            f"{int(source[i]):0{digits}x}" if j == 0 else "",
                            int(i + 1 in assignment.info_set) if j == 0 else ""])
    print(f"residual_erasures={result.residual_erasures} "
          f"success={result.residual_erasures == 0 and bool(np.all(result.source_estimate == source))}",
          file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polar-aloha", description="Polar slotted ALOHA over slot erasure channels")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="capacity order, I and Z of the synthetic channels")
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--epsilon", type=float, required=True)
    c.add_argument("--r", type=int, default=1)
    c.add_argument("--M", type=int, default=None, help="mark the first M indices as information")
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    t = sub.add_parser("table", help="write an SPA-f look-up table")
    t.add_argument("--N", type=int, required=True)
    t.add_argument("--design-epsilon", type=float, required=True)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("simulate", help="Monte Carlo throughput sweep")
    s.add_argument("--config", help="JSON file with SimConfig fields")
    s.add_argument("--N", type=int)
    s.add_argument("--epsilon", type=_floats)
    s.add_argument("--M", type=_ints)
    s.add_argument("--G", type=_floats)
    s.add_argument("--r", type=int, default=8)
    s.add_argument("--decoder", choices=["pSC", "pSCL"], default="pSC")
    s.add_argument("--L", type=int, default=1)
    s.add_argument("--spa-mode", choices=["v", "f"], default="v")
    s.add_argument("--spa-table")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bounds", help="pSC throughput bounds")
    b.add_argument("--N", type=int, required=True)
    b.add_argument("--epsilon", type=_floats, required=True)
    b.add_argument("--M", type=_ints)
    b.add_argument("--G", type=_floats)
    b.add_argument("--r", type=int, default=1)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    i = sub.add_parser("baseline", help="IRSA/CRDSA baseline with destructive collisions")
    i.add_argument("--N", type=int, required=True)
    i.add_argument("--epsilon", type=_floats, required=True)
    i.add_argument("--M", type=_ints)
    i.add_argument("--G", type=_floats)
    i.add_argument("--dist", default="2:1.0")
    i.add_argument("--trials", type=int, default=1000)
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--out")
    i.set_defaults(func=cmd_baseline)

    d = sub.add_parser("decode", help="decode one simulated frame")
    d.add_argument("--trace", action="store_true", help="dump the decoder lattice")
    d.add_argument("--N", type=int, required=True)
    d.add_argument("--M", type=int, required=True)
    d.add_argument("--epsilon", type=float, required=True)
    d.add_argument("--r", type=int, default=8)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--trial", type=int, default=0)
    d.add_argument("--out")
    d.set_defaults(func=cmd_decode)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"polar-aloha {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"polar-aloha {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


cli_dispatch = main

if __name__ == "__main__":
    sys.exit(main())
