"""Frank-Wolfe solvers for the norm-constrained problem.

Both solvers step with gamma = 2/(k+2) toward the rank-one / one-sparse
extreme points delivered by the ball oracles; the FW-P variant then
re-projects the sparse term after a unit gradient step, which is what
makes it practical when the target sparse matrix has many nonzeros.
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .iterates import LowRankIterate, Residual, SparseIterate, add_rank_one
from .oracles import argmax_abs_entry, leading_singular_pair, project_l1
from .rng import substream
from .trace import IterationRecord, SolverTrace

# dense caches are worthwhile up to this many entries
DENSE_CACHE_LIMIT = 4_000_000


@dataclass
class ConstrainedConfig:
    tau_L: float
    tau_S: float
    max_iter: int
    gap_tol: Optional[float] = None
    record_gap_every: int = 1

    def __post_init__(self):
        if self.tau_L < 0 or self.tau_S < 0:
            raise ValueError("ball radii must be nonnegative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.record_gap_every < 1:
            raise ValueError("record_gap_every must be at least 1")


def fw_step_size(k):
    """The 2/(k+2) schedule; gamma = 1 at k = 0."""
    if k < 0:
        raise ValueError("iteration index must be nonnegative")
    return 2.0 / (k + 2)


def duality_gap(mask, grad_values, x, v):
    """Surrogate gap <x - v, grad> over the mask, v the ball-LMO output.

    Upper-bounds the suboptimality of x; nonnegative up to rounding when
    v is an exact oracle output.
    """
    low_rank, sparse = x
    dir_low, dir_sparse = v
    diff_l = low_rank.omega_values(mask) - dir_low.omega_values(mask)
    diff_s = sparse.values - dir_sparse.values
    return float(np.dot(diff_l, grad_values) + np.dot(diff_s, grad_values))


def solve_fw_constrained(problem, config, seed=0, check_every=100):
    """Plain Frank-Wolfe (rank-one + one-sparse steps, fixed schedule)."""
    return _solve_constrained(problem, config, projected=False,
                              seed=seed, check_every=check_every)


def solve_fwp(problem, config, seed=0, check_every=100):
    """Frank-Wolfe-Projection: FW half-step, then a projected gradient
    step on the sparse term (unit step, l1 ball of radius tau_S)."""
    return _solve_constrained(problem, config, projected=True,
                              seed=seed, check_every=check_every)


def _solve_constrained(problem, config, projected, seed, check_every):
    con = problem.require_constrained()
    if (config.tau_L, config.tau_S) != (con.tau_L, con.tau_S):
        raise ValueError("config radii disagree with the problem formulation")
    mask = problem.mask
    m, n = mask.shape
    m_vals = problem.observed
    m_norm = float(np.linalg.norm(m_vals))

    low_rank = LowRankIterate(m, n, with_dense_cache=(m * n <= DENSE_CACHE_LIMIT))
    sparse = SparseIterate(mask)
    l_vals = np.zeros(mask.nnz)
    s_vals = sparse.values

    trace = SolverTrace()
    obj = problem.data_term(l_vals + s_vals - m_vals)
    warm_v = None

    for k in range(config.max_iter):
        t0 = time.perf_counter_ns()
        r = l_vals + s_vals - m_vals

        trip = leading_singular_pair(mask.operator(r),
                                     seed=substream(seed, k), v0=warm_v)
        warm_v = trip.v
        t_idx = argmax_abs_entry(r)
        g_inf = abs(float(r[t_idx]))

        gap = None
        if k % config.record_gap_every == 0:
            # <x - v, grad>: the v-terms collapse to tau * dual norms
            gap = float(np.dot(l_vals, r) + np.dot(s_vals, r)
                        + con.tau_L * trip.sigma + con.tau_S * g_inf)

        rank_k = low_rank.rank
        nnz_k = sparse.nnz

        if g_inf == 0.0:
            # residual is identically zero: exact optimum
            trace.append(IterationRecord(k, objective=obj, dual_gap=0.0,
                                         step_a=0.0, rank=rank_k, nnz=nnz_k,
                                         wall_nanos=time.perf_counter_ns() - t0))
            break

        gamma = fw_step_size(k)

        low_rank.scale(1.0 - gamma)
        l_vals *= 1.0 - gamma
        if con.tau_L > 0.0 and trip.sigma > 0.0:
            low_rank.append(-gamma * con.tau_L, trip.u, trip.v)
            add_rank_one(l_vals, mask, gamma, -con.tau_L, trip.u, trip.v)

        s_vals *= 1.0 - gamma
        if con.tau_S > 0.0:
            s_vals[t_idx] -= gamma * con.tau_S * np.sign(r[t_idx])

        if projected:
            r_half = l_vals + s_vals - m_vals
            obj_half = problem.data_term(r_half)
            s_vals[:] = project_l1(s_vals - r_half, con.tau_S)
            obj_next = problem.data_term(l_vals + s_vals - m_vals)
            if obj_next > obj_half + 1e-10 * max(1.0, obj_half):
                raise RuntimeError(
                    f"projection step increased the objective at k={k}: "
                    f"{obj_next!r} > {obj_half!r}")
        else:
            obj_next = problem.data_term(l_vals + s_vals - m_vals)

        trace.append(IterationRecord(k, objective=obj, dual_gap=gap,
                                     step_a=gamma, rank=rank_k, nnz=nnz_k,
                                     wall_nanos=time.perf_counter_ns() - t0))
        obj = obj_next

        if (k + 1) % 256 == 0:
            low_rank.compress()
        if check_every and (k + 1) % check_every == 0:
            incremental = Residual(mask, l_vals + s_vals - m_vals)
            scratch = Residual.compute(mask, low_rank, sparse, m_vals)
            scale = low_rank.frobenius_norm() + sparse.frobenius_norm() + m_norm
            incremental.check_against(scratch, scale)

        if config.gap_tol is not None and gap is not None and gap <= config.gap_tol:
            break

    low_rank.compress()
    final_k = trace.final().k + 1 if len(trace) else 0
    trace.append(IterationRecord(final_k, objective=obj,
                                 rank=low_rank.rank, nnz=sparse.nnz))
    return low_rank, sparse, trace
