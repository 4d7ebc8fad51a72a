"""Proximal-gradient baselines for the penalized problem.

ISTA alternates singular-value thresholding on the low-rank term with
soft-thresholding on the sparse term, both at step 1/2 (the gradient of
the data term is 2-Lipschitz); FISTA adds Nesterov momentum.  Unlike
the Frank-Wolfe family these need dense iterates, so they exist for
comparison at desk scale.
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .iterates import LowRankIterate, SparseIterate
from .numerics import l1_norm
from .oracles import initial_sv, singular_value_threshold, soft_threshold, sv_heuristic
from .trace import IterationRecord, SolverTrace

MEMORY_BUDGET_ENTRIES = 400_000_000


@dataclass
class IstaConfig:
    lambda_L: float
    lambda_S: float
    max_iter: int
    target_objective: Optional[float] = None

    def __post_init__(self):
        if self.lambda_L <= 0 or self.lambda_S <= 0:
            raise ValueError("penalty weights must be strictly positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


def solve_ista(problem, config, check_descent=True):
    """ISTA with the dynamically-sized partial SVD.

    Stops at max_iter or once the objective reaches
    config.target_objective.  The objective is checked to be
    non-increasing (1e-9 relative) every step.
    """
    return _solve_prox(problem, config, accelerated=False, check_descent=check_descent)


def solve_fista(problem, config):
    """FISTA: prox steps at Nesterov-extrapolated points.

    The first iteration coincides with ISTA (zero momentum); later
    objectives need not be monotone.
    """
    return _solve_prox(problem, config, accelerated=True, check_descent=False)


def _objective(problem, data_vals, nuclear, s_vals, lam_L, lam_S):
    return problem.data_term(data_vals) + lam_L * nuclear + lam_S * l1_norm(s_vals)


def _solve_prox(problem, config, accelerated, check_descent):
    pen = problem.require_penalized()
    if (config.lambda_L, config.lambda_S) != (pen.lambda_L, pen.lambda_S):
        raise ValueError("config weights disagree with the problem formulation")
    lam_L, lam_S = pen.lambda_L, pen.lambda_S
    mask = problem.mask
    m, n = mask.shape
    if m * n > MEMORY_BUDGET_ENTRIES:
        raise ValueError(
            f"dense baseline needs {m * n} entries, over the "
            f"{MEMORY_BUDGET_ENTRIES} budget; use a Frank-Wolfe solver")
    m_vals = problem.observed
    d = min(m, n)

    low_rank = LowRankIterate(m, n)
    dense_L = np.zeros((m, n))
    s_vals = np.zeros(mask.nnz)
    nuclear = 0.0
    f = _objective(problem, -m_vals, 0.0, s_vals, lam_L, lam_S)

    if accelerated:
        t_momentum = 1.0
        prev_dense_L = dense_L
        prev_s_vals = s_vals
        hat_L = dense_L
        hat_s = s_vals

    sv = initial_sv(d)
    trace = SolverTrace()

    for k in range(config.max_iter):
        t0 = time.perf_counter_ns()
        if accelerated:
            g_vals = mask.project(hat_L) + hat_s - m_vals
            point_L, point_s = hat_L, hat_s
        else:
            g_vals = mask.project(dense_L) + s_vals - m_vals
            point_L, point_s = dense_L, s_vals

        rank_k = low_rank.rank
        nnz_k = int(np.count_nonzero(s_vals))

        shifted = point_L - 0.5 * mask.scatter(g_vals)
        new_low, svp = singular_value_threshold(shifted, lam_L / 2.0, sv)
        sv = sv_heuristic(sv if svp <= sv else d, svp, d)

        new_s = soft_threshold(point_s - 0.5 * g_vals, lam_S / 2.0)

        if accelerated:
            prev_dense_L, prev_s_vals = dense_L, s_vals
        low_rank = new_low
        dense_L = new_low.densify()
        s_vals = new_s
        # orthonormal factors: sum of coefficients is the exact nuclear norm
        nuclear = low_rank.nuclear_norm_upper()

        data_vals = mask.project(dense_L) + s_vals - m_vals
        f_next = _objective(problem, data_vals, nuclear, s_vals, lam_L, lam_S)
        if check_descent and f_next > f * (1.0 + 1e-9) + 1e-300:
            raise RuntimeError(f"ISTA objective increased at k={k}: {f_next!r} > {f!r}")

        if accelerated:
            t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_momentum * t_momentum))
            c = (t_momentum - 1.0) / t_next
            hat_L = dense_L + c * (dense_L - prev_dense_L)
            hat_s = s_vals + c * (s_vals - prev_s_vals)
            t_momentum = t_next

        trace.append(IterationRecord(k, objective=f, step_a=0.5,
                                     rank=rank_k, nnz=nnz_k,
                                     wall_nanos=time.perf_counter_ns() - t0))
        f = f_next

        if config.target_objective is not None and f <= config.target_objective:
            break

    trace.append(IterationRecord(trace.final().k + 1, objective=f,
                                 rank=low_rank.rank, nnz=int(np.count_nonzero(s_vals))))
    return low_rank, SparseIterate(mask, s_vals), trace
