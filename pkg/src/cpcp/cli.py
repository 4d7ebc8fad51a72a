"""Command line interface.

    cpcp generate --spec spec.json --out dir/
    cpcp solve --algo fwt --problem dir/ --config cfg.json --trace out.csv
    cpcp bench --algo fwt --m 10000 --sizes 250,500,1000 --out bench.csv

Exit codes: 0 success, 2 bad input, 3 solver hit max_iter without
meeting its tolerance (results are still written).
"""

import argparse
import json
import os
import sys

from . import bench as bench_mod
from . import matio
from .fwt import stopping_check
from .mask import ObservationMask
from .problem import CpcpProblem
from .registry import ALL_ALGOS, CONSTRAINED_ALGOS, PENALIZED_ALGOS, PROX_ALGOS, \
    make_config, solve
from .synthetic import SyntheticSpec, gen_synthetic


def _cmd_generate(args):
    with open(args.spec) as fh:
        raw = json.load(fh)
    spec = SyntheticSpec(**raw)
    gt = gen_synthetic(spec)
    os.makedirs(args.out, exist_ok=True)
    matio.save_matrix(os.path.join(args.out, "observed.mtx"), (gt.mask, gt.observed))
    matio.save_matrix(os.path.join(args.out, "ground_truth_low_rank.mtx"), gt.L0)
    if gt.sparse_values.size:
        support = ObservationMask((spec.m, spec.n), gt.sparse_rows, gt.sparse_cols)
        matio.save_matrix(os.path.join(args.out, "ground_truth_sparse.mtx"),
                          (support, gt.sparse_values))
    with open(os.path.join(args.out, "meta.json"), "w") as fh:
        json.dump({"m": spec.m, "n": spec.n, "rho": spec.rho, "seed": spec.seed,
                   "tau_L_true": gt.tau_L_true, "tau_S_true": gt.tau_S_true,
                   "spec": raw}, fh, indent=2)
    print(f"wrote instance to {args.out} (|mask|={gt.mask.nnz}, "
          f"tau_L={gt.tau_L_true:.6g}, tau_S={gt.tau_S_true:.6g})")
    return 0


def _converged(algo, config, trace):
    if algo in ("fw", "fwp"):
        if config.gap_tol is None:
            return True
        gaps = [g for _, g in trace.gaps()]
        return bool(gaps) and min(gaps) <= config.gap_tol
    if algo == "fwt":
        objs = trace.objectives()
        window = config.stall_window + 1
        if len(objs) < window:
            return False
        return stopping_check(objs[-window:], config.epsilon)
    if algo in PROX_ALGOS:
        if config.target_objective is None:
            return True
        return trace.final().objective <= config.target_objective
    return True  # fw-pen runs a fixed budget


def _cmd_solve(args):
    mask, observed = matio.load_matrix(os.path.join(args.problem, "observed.mtx"))
    with open(args.config) as fh:
        params = json.load(fh)
    config = make_config(args.algo, params)
    if args.algo in CONSTRAINED_ALGOS:
        problem = CpcpProblem.constrained(mask, observed, config.tau_L, config.tau_S)
    else:
        problem = CpcpProblem.penalized(mask, observed, config.lambda_L, config.lambda_S)

    low_rank, sparse, trace = solve(args.algo, problem, config, seed=args.seed)

    if args.trace:
        matio.export_trace(args.trace, trace)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        matio.save_matrix(os.path.join(args.out, "low_rank.mtx"), low_rank.densify())
        matio.save_matrix(os.path.join(args.out, "sparse.mtx"), (mask, sparse.values))
    final = trace.final()
    print(f"{args.algo}: {final.k} iterations, objective {final.objective:.9g}, "
          f"rank {final.rank}, nnz {final.nnz}")
    return 0 if _converged(args.algo, config, trace) else 3


def _cmd_bench(args):
    sizes = [int(s) for s in args.sizes.split(",") if s]
    rows = bench_mod.bench_per_iteration(
        args.algo, args.m, sizes, rho=args.rho, repetitions=args.reps,
        seed=args.seed, iters=args.iters)
    bench_mod.write_bench_csv(args.out, rows)
    for row in rows:
        print(f"{row.solver} m={row.m} n={row.n} rho={row.rho:g} "
              f"median_iter={row.median_iter_nanos / 1e6:.2f} ms")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="cpcp",
                                     description="Low-rank + sparse recovery solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic problem directory")
    gen.add_argument("--spec", required=True, help="JSON file of SyntheticSpec fields")
    gen.add_argument("--out", required=True, help="output directory")
    gen.set_defaults(func=_cmd_generate)

    slv = sub.add_parser("solve", help="run a solver on a problem directory")
    slv.add_argument("--algo", required=True, choices=ALL_ALGOS)
    slv.add_argument("--problem", required=True, help="directory with observed.mtx")
    slv.add_argument("--config", required=True, help="JSON config for the algorithm")
    slv.add_argument("--trace", help="write per-iteration CSV (or .jsonl) here")
    slv.add_argument("--out", help="directory for low_rank.mtx / sparse.mtx")
    slv.add_argument("--seed", type=int, default=0)
    slv.set_defaults(func=_cmd_solve)

    ben = sub.add_parser("bench", help="per-iteration cost across a size sweep")
    ben.add_argument("--algo", required=True, choices=ALL_ALGOS)
    ben.add_argument("--m", type=int, required=True)
    ben.add_argument("--sizes", required=True, help="comma-separated ascending n values")
    ben.add_argument("--rho", type=float, default=1.0)
    ben.add_argument("--reps", type=int, default=1)
    ben.add_argument("--iters", type=int, default=4)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--out", required=True, help="CSV report path")
    ben.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"cpcp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
