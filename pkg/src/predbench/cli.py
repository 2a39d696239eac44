"""Command line front end.

predbench run    times insert/query/delete phases over generated workloads
                 and writes one CSV row per iteration.
predbench verify replays a deterministic operation stream against the
                 sorted-array oracle and reports the first divergence.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    STRUCTURES, WorkloadSpec, emit_csv, make_structure, parse_params,
    run_experiment, verify_structure,
)

BENCH_WIDTHS = (32, 40, 64)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="predbench",
        description="Dynamic predecessor structure benchmarks.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="time a structure over generated workloads")
    run.add_argument("--structure", required=True, choices=STRUCTURES)
    run.add_argument("--width", type=int, required=True, choices=BENCH_WIDTHS)
    run.add_argument("--keys", type=int, default=1 << 20,
                     help="key draws per iteration (default 2^20)")
    run.add_argument("--queries", type=int, default=10 ** 6,
                     help="query draws per iteration (default 10^6)")
    run.add_argument("--iterations", type=int, default=5)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="structure parameter, repeatable")
    run.add_argument("--out", required=True, help="CSV output path")
    run.add_argument("--aggregate", action="store_true",
                     help="append a mean row with iteration=avg")

    ver = sub.add_parser("verify", help="differential check against the oracle")
    ver.add_argument("--structure", required=True, choices=STRUCTURES)
    ver.add_argument("--width", type=int, default=32, choices=BENCH_WIDTHS)
    ver.add_argument("--ops", type=int, default=100_000)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    return ap


def _cmd_run(args) -> int:
    params = parse_params(args.param)
    factory, params_str = make_structure(args.structure, args.width, params)
    spec = WorkloadSpec(width=args.width, n_keys=args.keys,
                        n_queries=args.queries, seed=args.seed)
    measurements = []
    for iteration in range(1, args.iterations + 1):
        m = run_experiment(factory, args.structure, params_str, spec, iteration)
        measurements.append(m)
        print(f"{args.structure} w={args.width} it={iteration}: "
              f"insert {m.insert_ops_s:,.0f} op/s, "
              f"query {m.query_ops_s:,.0f} op/s, "
              f"delete {m.delete_ops_s:,.0f} op/s",
              flush=True)
    emit_csv(measurements, args.out, aggregate=args.aggregate)
    print(f"wrote {args.out}")
    return 0


def _cmd_verify(args) -> int:
    params = parse_params(args.param)
    factory, _ = make_structure(args.structure, args.width, params)
    d = verify_structure(factory, args.width, args.ops, args.seed)
    if d is None:
        print(f"verify ok: {args.structure} agreed with the oracle "
              f"over {args.ops} operations (seed {args.seed})")
        return 0
    print(f"divergence at op {d.index}: {d.op} {d.value} "
          f"expected {d.expected!r} got {d.got!r}")
    print(f"seed {args.seed}")
    print(f"minimized prefix length {d.minimized_length}")
    return 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_verify(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
