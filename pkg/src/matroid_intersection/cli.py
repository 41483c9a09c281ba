"""Command-line surface: solve, verify, gen, and bench subcommands.

Exit codes: 0 on success, 1 when an enabled verification or invariant
fails, 2 on input errors.  Reports are canonical JSON (sorted keys, fixed
formatting), so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .instances import (
    GENERATOR_FAMILIES,
    InstanceFormatError,
    InstanceFile,
    canonical_json,
    generate_instance,
    parse_instance,
)
from .matroids import (
    AXIOM_CHECK_LIMIT,
    PHASES,
    GroundSetError,
    axiom_check,
    rank,
)
from .reference import (
    BRUTE_FORCE_LIMIT,
    CALIBRATED_BUDGET_CONSTANT,
    breadth_first_layers,
    brute_force_max_common,
    build_naive_exchange_graph,
    budget_ratio,
    check_bounds,
)
from .solver import RunStats, lazy_bfs, solve

DEFAULT_BUDGET_CONSTANT = 2 * CALIBRATED_BUDGET_CONSTANT


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _ground_rank(instance: InstanceFile) -> int:
    m1, m2 = instance.build()
    everything = range(instance.ground_size)
    return max(rank(m1, everything), rank(m2, everything))


def _run_report(instance: InstanceFile, solution, certificate, stats: RunStats) -> dict:
    return {
        "instance": instance.name or "",
        "n": instance.ground_size,
        "seed": instance.seed,
        "solution": sorted(solution),
        "size": len(solution),
        "certificate": {
            "dual_set": sorted(certificate.dual_set),
            "rank1_inside": certificate.rank1_inside,
            "rank2_outside": certificate.rank2_outside,
        },
        "oracle_calls": {
            "matroid1": {label: stats.calls_matroid1.get(label, 0) for label in PHASES},
            "matroid2": {label: stats.calls_matroid2.get(label, 0) for label in PHASES},
            "total": stats.total_calls,
        },
        "path_lengths": list(stats.path_lengths),
        "path_start_sizes": list(stats.path_start_sizes),
        "augmentations": stats.augmentations,
        "shortcut_additions": stats.shortcut_additions,
    }


def _check_axioms(instance: InstanceFile) -> int:
    if instance.ground_size > AXIOM_CHECK_LIMIT:
        raise GroundSetError(
            f"axiom check requires n <= {AXIOM_CHECK_LIMIT}, "
            f"got n={instance.ground_size}"
        )
    failures = 0
    for label, matroid in zip(("matroid1", "matroid2"), instance.build()):
        report = axiom_check(matroid)
        if not report.ok:
            failures += 1
            print(f"axiom check failed for {label}: {report.summary()}", file=sys.stderr)
    return failures


def _check_baseline(instance: InstanceFile, snapshots: list[frozenset[int]]) -> int:
    """Re-run every BFS lazily and against the materialized graph; compare layers."""
    mismatches = 0
    for snapshot in snapshots:
        m1, m2 = instance.build()
        _, state = lazy_bfs(m1, m2, snapshot)
        graph = build_naive_exchange_graph(*instance.build(), snapshot)
        layers, _ = breadth_first_layers(graph)
        if state.layers != layers:
            mismatches += 1
            print(
                f"layer mismatch at solution {sorted(snapshot)}: "
                f"lazy {state.layers} vs naive {layers}",
                file=sys.stderr,
            )
    return mismatches


def cmd_solve(args: argparse.Namespace) -> int:
    instance = parse_instance(_read_text(args.instance))
    if args.axiom_check and _check_axioms(instance):
        return 1

    snapshots: list[frozenset[int]] = []
    m1, m2 = instance.build()
    solution, certificate, stats = solve(
        m1, m2, on_bfs=snapshots.append if args.baseline else None
    )
    report = _run_report(instance, solution, certificate, stats)

    failed = False
    if args.baseline:
        mismatches = _check_baseline(instance, snapshots)
        report["baseline"] = {"bfs_runs": len(snapshots), "mismatches": mismatches}
        failed = failed or mismatches > 0
    if args.check_bounds:
        r = _ground_rank(instance)
        bounds = check_bounds(stats, instance.ground_size, r, args.budget_constant)
        report["bound_checks"] = {
            "r": r,
            "paths_ok": all(check.ok for check in bounds.per_path),
            "total_arcs": bounds.total_arcs,
            "total_bound": round(float(bounds.total_bound), 6),
            "total_ok": bounds.total_ok,
            "measured_calls": bounds.measured_calls,
            "budget_value": round(bounds.budget_value, 6),
            "budget_ok": bounds.budget_ok,
            "budget_constant": args.budget_constant,
        }
        if not bounds.ok:
            print("bound check failed", file=sys.stderr)
            failed = True

    text = canonical_json(report)
    sys.stdout.write(text)
    if args.stats:
        _write_text(args.stats, text)
    return 1 if failed else 0


def cmd_verify(args: argparse.Namespace) -> int:
    instance = parse_instance(_read_text(args.instance))
    if instance.ground_size > BRUTE_FORCE_LIMIT:
        print(
            f"verify requires n <= {BRUTE_FORCE_LIMIT}, got n={instance.ground_size}",
            file=sys.stderr,
        )
        return 2

    solution, certificate, _ = solve(*instance.build())
    best_size, witness = brute_force_max_common(*instance.build())
    cert_ok = certificate.value == len(solution)
    size_ok = len(solution) == best_size
    print(
        f"solver size={len(solution)} brute-force size={best_size} "
        f"certificate={certificate.rank1_inside}+{certificate.rank2_outside} "
        f"witness={sorted(witness)}"
    )
    if size_ok and cert_ok:
        print("verify: OK")
        return 0
    print("verify: MISMATCH", file=sys.stderr)
    return 1


def cmd_gen(args: argparse.Namespace) -> int:
    instance = generate_instance(args.family, args.n, args.seed)
    text = instance.to_json()
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    import json

    config = json.loads(_read_text(args.config))
    if not isinstance(config, dict) or "runs" not in config:
        raise InstanceFormatError('bench config must be an object with a "runs" list')
    runs = config["runs"]
    if not isinstance(runs, list):
        raise InstanceFormatError('field "runs" must be a list')

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        [
            "family",
            "n",
            "seed",
            "size",
            "r",
            "calls_matroid1",
            "calls_matroid2",
            "calls_total",
            "sum_path_lengths",
            "total_length_bound",
            "augmentations",
            "shortcut_additions",
            "budget_ratio",
        ]
    )
    failures = 0
    for entry in runs:
        if not isinstance(entry, dict) or not {"family", "ns", "seeds"} <= set(entry):
            raise InstanceFormatError(
                'each run needs "family", "ns", and "seeds" fields'
            )
        for n in entry["ns"]:
            for seed in entry["seeds"]:
                instance = generate_instance(entry["family"], n, seed)
                solution, _, stats = solve(*instance.build())
                r = _ground_rank(instance)
                bounds = check_bounds(stats, n, r, args.budget_constant)
                if not (all(c.ok for c in bounds.per_path) and bounds.total_ok):
                    print(
                        f"path-length bound violated on {instance.name}",
                        file=sys.stderr,
                    )
                    failures += 1
                writer.writerow(
                    [
                        entry["family"],
                        n,
                        seed,
                        len(solution),
                        r,
                        sum(stats.calls_matroid1.values()),
                        sum(stats.calls_matroid2.values()),
                        stats.total_calls,
                        sum(stats.path_lengths),
                        f"{float(bounds.total_bound):.6f}",
                        stats.augmentations,
                        stats.shortcut_additions,
                        f"{budget_ratio(stats.total_calls, n, r):.6f}",
                    ]
                )
    text = buffer.getvalue()
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mi",
        description="Maximum common independent set solver and oracle-call benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance and print a JSON report")
    p_solve.add_argument("instance", help="instance JSON file")
    p_solve.add_argument(
        "--baseline",
        action="store_true",
        help="re-check every BFS against the fully materialized exchange graph",
    )
    p_solve.add_argument(
        "--check-bounds",
        action="store_true",
        help="append path-length and call-budget checks to the report",
    )
    p_solve.add_argument(
        "--axiom-check",
        action="store_true",
        help=f"exhaustively verify the matroid axioms first (n <= {AXIOM_CHECK_LIMIT})",
    )
    p_solve.add_argument("--stats", metavar="FILE", help="also write the report to FILE")
    p_solve.add_argument(
        "--budget-constant",
        type=float,
        default=DEFAULT_BUDGET_CONSTANT,
        help="multiplier for the call-budget check (default: %(default)s)",
    )
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser(
        "verify", help="compare the solver against brute force (small n)"
    )
    p_verify.add_argument("instance", help="instance JSON file")
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("gen", help="generate an instance deterministically")
    p_gen.add_argument("--family", required=True, choices=GENERATOR_FAMILIES)
    p_gen.add_argument("--n", required=True, type=int)
    p_gen.add_argument("--seed", required=True, type=int)
    p_gen.add_argument("--out", metavar="FILE", help="write to FILE instead of stdout")
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="run a benchmark matrix, emit CSV")
    p_bench.add_argument("--config", required=True, help="JSON config file")
    p_bench.add_argument("--out", metavar="FILE", help="write CSV to FILE")
    p_bench.add_argument(
        "--budget-constant",
        type=float,
        default=DEFAULT_BUDGET_CONSTANT,
        help="multiplier for the call-budget column check (default: %(default)s)",
    )
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceFormatError, GroundSetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
