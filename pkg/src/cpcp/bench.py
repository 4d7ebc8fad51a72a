"""Per-iteration cost measurements across a size sweep.

Runs a solver for a handful of iterations per size, takes per-iteration
wall times from the trace (iteration 0 is warm-up and excluded), and
reports the median.  Repetitions run sequentially to keep timings
honest.
"""

import csv
import math
import statistics
from dataclasses import dataclass

from .registry import CONSTRAINED_ALGOS, PENALIZED_ALGOS, PROX_ALGOS, make_config, solve
from .rng import substream
from .synthetic import SyntheticSpec, default_weights, gen_synthetic


@dataclass
class BenchRow:
    solver: str
    m: int
    n: int
    rho: float
    median_iter_nanos: int


def _bench_config(algo, gt, iters, delta):
    if algo in CONSTRAINED_ALGOS:
        return gt.problem_constrained(), make_config(algo, {
            "tau_L": gt.tau_L_true, "tau_S": gt.tau_S_true,
            "max_iter": iters, "record_gap_every": 10})
    lambda_L, lambda_S = default_weights(gt.mask, gt.observed, delta)
    problem = gt.problem_penalized(lambda_L, lambda_S)
    if algo in PENALIZED_ALGOS:
        # epsilon tiny so the stall rule cannot cut the measurement short
        return problem, make_config(algo, {
            "lambda_L": lambda_L, "lambda_S": lambda_S,
            "max_iter": iters, "epsilon": 1e-12})
    assert algo in PROX_ALGOS
    return problem, make_config(algo, {
        "lambda_L": lambda_L, "lambda_S": lambda_S, "max_iter": iters})


def bench_per_iteration(algo, m, sizes, rho=1.0, repetitions=1, seed=0,
                        iters=4, rank=5, delta=0.01):
    """Median per-iteration nanoseconds of `algo` for each n in `sizes`.

    Sizes must be ascending; an empty sweep yields an empty report.
    """
    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("size sweep must be strictly ascending")
    if repetitions < 1 or iters < 2:
        raise ValueError("need at least one repetition and two iterations")
    rows = []
    for si, n in enumerate(sizes):
        samples = []
        for rep in range(repetitions):
            spec = SyntheticSpec(m=m, n=n, r=rank, rho=rho,
                                 seed=substream(seed, 1000 * si + rep))
            gt = gen_synthetic(spec)
            problem, config = _bench_config(algo, gt, iters, delta)
            _, _, trace = solve(algo, problem, config, seed=substream(seed, rep))
            samples.extend(r.wall_nanos for r in trace
                           if r.wall_nanos is not None and r.k >= 1)
        rows.append(BenchRow(algo, m, n, rho, int(statistics.median(samples))))
    return rows


def growth_per_doubling(rows):
    """Geometric-mean time ratio per doubling of n across the sweep."""
    if len(rows) < 2:
        raise ValueError("need at least two sweep points")
    first, last = rows[0], rows[-1]
    doublings = math.log2(last.n / first.n)
    return (last.median_iter_nanos / first.median_iter_nanos) ** (1.0 / doublings)


def write_bench_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["solver", "m", "n", "rho", "median_iter_nanos"])
        for r in rows:
            writer.writerow([r.solver, r.m, r.n, f"{r.rho:.17g}", r.median_iter_nanos])
