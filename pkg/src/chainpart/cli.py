"""Command-line interface.

Subcommands
-----------
``partition``   run one strategy on one matrix, report cost and probes,
                optionally write the partition as JSON
``evaluate``    re-cost a stored row partition: per-part costs, bottleneck,
                total, and the conventional cut metrics
``bench``       run a strategy/K grid over a directory of matrices and
                write a results CSV plus a performance-profile CSV
``reorder``     reverse Cuthill-McKee bandwidth reduction
``domcount``    self-test of the dominance-counting structures

Options may come from the command line or a JSON ``--config`` file; the
command line wins.  Exit codes: 0 ok, 2 bad configuration, 3 infeasible,
4 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bench import (
    bench_suite,
    objective_for,
    run_strategy,
    write_bench_csv,
    write_profile_csv,
)
from .costs import AtomCounters, CostCoefficients
from .dominance import (
    OfflineDominanceCounter,
    RankSpaceCounter,
    chazelle_params,
    constant_pass_params,
)
from .matrix import (
    CsrMatrix,
    MatrixFormatError,
    load_matrix_market,
    save_matrix_market,
)
from .partition import MapPartition, SplitPartition, load_partition
from .reorder import bandwidth, reorder_matrix, write_permutation
from .total import InfeasibleError

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

_DEFAULTS = {
    "eps": 0.1,
    "c_row": 10.0,
    "c_entry": 1.0,
    "c_message": 100.0,
    "seed": 0,
    "trials": 1,
    "k_grid": "2,4,8",
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chainpart", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file of option defaults")
        sp.add_argument("--seed", type=int)

    sp = sub.add_parser("partition", help="partition one matrix")
    sp.add_argument("matrix")
    sp.add_argument("--obj", help="strategy name, e.g. balance-work, split-conn")
    sp.add_argument("--alg", help="exact | approx | lazy | dynamic | "
                                  "dynamic-simul | quadrangle")
    sp.add_argument("-K", dest="K", type=int, help="number of parts")
    sp.add_argument("--eps", type=float, help="approximation tolerance")
    sp.add_argument("--c-row", dest="c_row", type=float)
    sp.add_argument("--c-entry", dest="c_entry", type=float)
    sp.add_argument("--c-message", dest="c_message", type=float)
    sp.add_argument("--w-min", dest="w_min", type=float,
                    help="count only entries from rows of at least this degree")
    sp.add_argument("--w-max", dest="w_max", type=float,
                    help="per-part weight cap")
    sp.add_argument("--balance", type=float,
                    help="relative slack of the per-part nonzero cap")
    sp.add_argument("--block-size", dest="block_size", type=int)
    sp.add_argument("--partition", dest="partition",
                    help="row partition JSON for the assign-* strategies")
    sp.add_argument("--fixed-phi", dest="fixed_phi",
                    help="column assignment JSON for the nonsym objective")
    sp.add_argument("--symmetric", action="store_true", default=None,
                    help="symmetrize the pattern before partitioning")
    sp.add_argument("--out", help="write the partition as JSON")
    common(sp)

    sp = sub.add_parser("evaluate", help="re-cost a stored partition")
    sp.add_argument("matrix")
    sp.add_argument("--partition", dest="partition", required=True,
                    help="row partition JSON to evaluate")
    sp.add_argument("--obj")
    sp.add_argument("--c-row", dest="c_row", type=float)
    sp.add_argument("--c-entry", dest="c_entry", type=float)
    sp.add_argument("--c-message", dest="c_message", type=float)
    sp.add_argument("--w-min", dest="w_min", type=float)
    sp.add_argument("--fixed-phi", dest="fixed_phi")
    common(sp)

    sp = sub.add_parser("bench", help="run a strategy/K grid over a suite")
    sp.add_argument("suite", help="directory of MatrixMarket files")
    sp.add_argument("--strategies", help="comma-separated strategy names")
    sp.add_argument("--k-grid", dest="k_grid", help="comma-separated part counts")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--c-row", dest="c_row", type=float)
    sp.add_argument("--c-entry", dest="c_entry", type=float)
    sp.add_argument("--c-message", dest="c_message", type=float)
    sp.add_argument("--balance", type=float)
    sp.add_argument("--w-max", dest="w_max", type=float)
    sp.add_argument("--block-size", dest="block_size", type=int)
    sp.add_argument("--out", required=True, help="results CSV path")
    common(sp)

    sp = sub.add_parser("reorder", help="reverse Cuthill-McKee reordering")
    sp.add_argument("matrix")
    sp.add_argument("--out", help="write the reordered matrix")
    sp.add_argument("--perm-out", dest="perm_out",
                    help="write the row permutation, one 1-based index per line")
    sp.add_argument("--col-perm-out", dest="col_perm_out",
                    help="write the column permutation")
    common(sp)

    sp = sub.add_parser("domcount", help="dominance-counting self-test")
    sp.add_argument("--selftest", action="store_true", default=None)
    sp.add_argument("--trials", type=int)
    common(sp)

    return p


def _merge_config(args) -> None:
    """Layer option sources: command line > --config JSON > defaults."""
    if getattr(args, "config", None):
        with open(args.config) as fh:
            conf = json.load(fh)
        if not isinstance(conf, dict):
            raise ValueError("config file must hold a JSON object")
        for key, val in conf.items():
            if getattr(args, key, None) is None:
                setattr(args, key, val)
    for key, val in _DEFAULTS.items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, val)


def _coefficients(args) -> CostCoefficients:
    return CostCoefficients(row_cost=args.c_row, entry_cost=args.c_entry,
                            message_cost=args.c_message,
                            min_degree=getattr(args, "w_min", None))


def _symmetrized_pattern(A: CsrMatrix) -> CsrMatrix:
    if A.nrows != A.ncols:
        raise ValueError("--symmetric needs a square matrix")
    rows = np.repeat(np.arange(A.nrows), A.row_degrees())
    return CsrMatrix.from_coo(
        A.nrows, A.ncols,
        np.concatenate([rows, A.col_idx]),
        np.concatenate([A.col_idx, rows]),
        np.ones(2 * A.nnz))


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_split(path, what="partition") -> SplitPartition:
    part = load_partition(_load_json(path))
    if not isinstance(part, SplitPartition):
        raise ValueError(f"{what} must be a contiguous split partition")
    return part


def _load_col_part(path, ncols) -> np.ndarray:
    phi = load_partition(_load_json(path))
    if not isinstance(phi, MapPartition):
        raise ValueError("--fixed-phi must be a map partition")
    if phi.num_items != ncols:
        raise ValueError(
            f"column assignment covers {phi.num_items} columns, matrix has {ncols}")
    return phi.assign


def cmd_partition(args) -> int:
    A = load_matrix_market(args.matrix)
    if args.symmetric:
        A = _symmetrized_pattern(A)
    if not args.obj:
        raise ValueError("--obj is required")
    coef = _coefficients(args)
    row_part = col_part = None
    if getattr(args, "partition", None):
        row_part = _load_split(args.partition, "--partition")
        if row_part.num_items != A.nrows:
            raise ValueError(
                f"partition covers {row_part.num_items} rows, matrix has {A.nrows}")
    if getattr(args, "fixed_phi", None):
        col_part = _load_col_part(args.fixed_phi, A.ncols)

    res = run_strategy(A, args.obj, K=args.K, alg=args.alg, coef=coef,
                       eps=args.eps, w_max=getattr(args, "w_max", None),
                       balance=getattr(args, "balance", None),
                       block_size=getattr(args, "block_size", None),
                       seed=args.seed, row_partition=row_part,
                       col_part=col_part)
    print(f"cost {res.cost:.10g}")
    print(f"probes {res.probes}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(res.partition.to_dict(), fh, indent=1)
            fh.write("\n")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    A = load_matrix_market(args.matrix)
    part = _load_split(args.partition)
    if part.num_items != A.nrows:
        raise ValueError(
            f"partition covers {part.num_items} rows, matrix has {A.nrows}")
    if not args.obj:
        raise ValueError("--obj is required")
    coef = _coefficients(args)
    obj = objective_for(args.obj, A, coef)
    col_part = None
    if getattr(args, "fixed_phi", None):
        col_part = _load_col_part(args.fixed_phi, A.ncols)
    if not obj.uniform and col_part is None:
        raise ValueError(f"{args.obj} needs --fixed-phi")

    counters = AtomCounters(A, min_degree=obj.min_degree(A), col_part=col_part)
    costs = []
    within = contained = incident = 0.0
    for k, (a, b) in enumerate(part.ranges()):
        at = counters.atoms(a, b, part=k if col_part is not None else None)
        costs.append(obj.value(at))
        within += at.within
        contained += at.contained
        incident += at.incident
    nonempty = counters.atoms(0, A.nrows).incident
    for k, cost in enumerate(costs):
        print(f"part {k + 1} {cost:.10g}")
    print(f"bottleneck {max(costs):.10g}")
    print(f"total {sum(costs):.10g}")
    print(f"edge_cut {A.nnz - within:.10g}")
    print(f"hyperedge_cut {nonempty - contained:.10g}")
    print(f"lambda_minus_one {incident - nonempty:.10g}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if not args.strategies:
        raise ValueError("--strategies is required")
    strategies = [s.strip() for s in str(args.strategies).split(",") if s.strip()]
    k_grid = [int(k) for k in str(args.k_grid).split(",") if str(k).strip()]
    coef = _coefficients(args)
    records, profile = bench_suite(
        args.suite, strategies, k_grid, trials=args.trials, seed=args.seed,
        coef=coef, eps=args.eps, balance=getattr(args, "balance", None),
        w_max=getattr(args, "w_max", None),
        block_size=getattr(args, "block_size", None))
    from pathlib import Path
    out = Path(args.out)
    write_bench_csv(out, records)
    write_profile_csv(out.with_name(out.stem + "_profile" + out.suffix), profile)
    print(f"wrote {len(records)} records to {out}")
    return EXIT_OK


def cmd_reorder(args) -> int:
    A = load_matrix_market(args.matrix)
    B, rperm, cperm = reorder_matrix(A)
    print(f"bandwidth {bandwidth(A)} -> {bandwidth(B)}")
    if args.out:
        save_matrix_market(args.out, B)
    if args.perm_out:
        write_permutation(args.perm_out, rperm)
    if args.col_perm_out:
        write_permutation(args.col_perm_out, cperm)
    return EXIT_OK


def cmd_domcount(args) -> int:
    if not args.selftest:
        raise ValueError("domcount only supports --selftest")
    rng = np.random.default_rng(args.seed)
    checks = 0
    for _ in range(args.trials):
        n = int(rng.integers(1, 200))
        grid = int(rng.integers(2, 64))
        xs = rng.integers(0, grid, size=n)
        ys = rng.integers(0, grid, size=n)
        order = np.lexsort((ys, xs))
        xs, ys = xs[order], ys[order]
        counters = [
            OfflineDominanceCounter(xs, ys, (grid, grid)),
            OfflineDominanceCounter(xs, ys, (grid, grid),
                                    params=chazelle_params(grid)),
            OfflineDominanceCounter(xs, ys, (grid, grid),
                                    params=constant_pass_params(grid)),
            RankSpaceCounter(xs, ys),
        ]
        qx = rng.integers(0, grid, size=32)
        qy = rng.integers(0, grid, size=32)
        want = np.array([(np.count_nonzero((xs <= x) & (ys <= y)))
                         for x, y in zip(qx, qy)])
        for counter in counters:
            got = np.array([counter.count(int(x), int(y))
                            for x, y in zip(qx, qy)])
            if not np.array_equal(got, want):
                print(f"selftest FAILED: {type(counter).__name__} "
                      f"disagrees with direct scan", file=sys.stderr)
                return 1
            checks += len(qx)
    print(f"selftest ok ({args.trials} trials, {checks} checks)")
    return EXIT_OK


_COMMANDS = {
    "partition": cmd_partition,
    "evaluate": cmd_evaluate,
    "bench": cmd_bench,
    "reorder": cmd_reorder,
    "domcount": cmd_domcount,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _merge_config(args)
        return _COMMANDS[args.command](args)
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (MatrixFormatError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
