"""Solvers for the penalized problem via its bounded epigraph form.

The objective g(L, S, t_L, t_S) = data term + lambda_L t_L + lambda_S t_S
is smooth once the norms are lifted into (t_L, t_S), and the feasible
region becomes compact after bounding t by U = g(0)/lambda.  Algorithm
variants: plain Frank-Wolfe with the fixed 2/(k+2) schedule and static
bounds, and FW-T, which adds an exact two-dimensional line search, a
soft-thresholding step on the sparse term, adaptive bound tightening,
and a stall-based stopping rule.
"""

import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from .iterates import LowRankIterate, Residual, SparseIterate, add_rank_one
from .numerics import l1_norm
from .oracles import argmax_abs_entry, leading_singular_pair, soft_threshold
from .rng import substream
from .trace import IterationRecord, SolverTrace
from .fw import DENSE_CACHE_LIMIT, fw_step_size

_DESCENT_TOL = 1e-10


@dataclass
class PenalizedConfig:
    lambda_L: float
    lambda_S: float
    max_iter: int
    epsilon: float = 1e-3
    stall_window: int = 5

    def __post_init__(self):
        if self.lambda_L <= 0 or self.lambda_S <= 0:
            raise ValueError("penalty weights must be strictly positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.stall_window < 1:
            raise ValueError("stall_window must be at least 1")


@dataclass
class BoundState:
    """Upper bounds on the optimal epigraph variables.

    Maintains U_L * lambda_L = U_S * lambda_S = current objective value,
    so the bounds tighten as the objective decreases.
    """
    U_L: float
    U_S: float

    def __post_init__(self):
        if self.U_L < 0 or self.U_S < 0:
            raise ValueError("bounds must be nonnegative")


def initial_bounds(problem):
    """Bounds from the zero solution: U = 0.5 ||P[M]||_F^2 / lambda."""
    pen = problem.require_penalized()
    g0 = 0.5 * problem.observed_sq_norm()
    return BoundState(g0 / pen.lambda_L, g0 / pen.lambda_S)


def update_bounds(state, g_value, lambda_L, lambda_S):
    """Tighten both bounds to g/lambda after a descent step.

    An objective increase beyond 1e-10 relative is an implementation
    bug, not a numerical hiccup, and raises.
    """
    g_prev = state.U_L * lambda_L
    if g_value > g_prev * (1.0 + _DESCENT_TOL) + 1e-300:
        raise RuntimeError(
            f"objective increased during bound update: {g_value!r} > {g_prev!r}")
    return BoundState(g_value / lambda_L, g_value / lambda_S)


def stopping_check(recent_g, epsilon):
    """True iff every consecutive relative decrease in the window is <= epsilon."""
    g = list(recent_g)
    if len(g) < 2:
        raise ValueError("stopping window not populated")
    for prev, nxt in zip(g, g[1:]):
        if prev <= 0.0:
            continue  # objective already at zero: stalled by definition
        if (prev - nxt) / prev > epsilon:
            return False
    return True


@dataclass
class PenalizedDirection:
    """LMO output (V_L, V_tL, V_S, V_tS) of the bounded epigraph problem."""
    low_rank: LowRankIterate
    v_tL: float
    sparse: SparseIterate
    v_tS: float
    sigma: float
    u: np.ndarray
    v: np.ndarray
    entry: int
    ghat_L: float
    ghat_S: float

    @property
    def active_L(self):
        return self.v_tL > 0.0

    @property
    def active_S(self):
        return self.v_tS > 0.0


def fw_direction_penalized(mask, grad_values, lambda_L, lambda_S, bounds,
                           seed=0, v0=None):
    """Direction selection via homogeneity of the linearized subproblem.

    With D_L = -u v^T from the leading pair of the gradient, the reduced
    cost is ghat_L = lambda_L - sigma: nonnegative reduced cost picks
    the zero pair, negative picks the extreme pair scaled to the bound.
    The sparse side is analogous with the largest-magnitude entry.
    """
    m, n = mask.shape
    trip = leading_singular_pair(mask.operator(grad_values), seed=seed, v0=v0)
    ghat_L = lambda_L - trip.sigma
    dir_low = LowRankIterate(m, n)
    v_tL = 0.0
    if ghat_L < 0.0 and bounds.U_L > 0.0:
        dir_low.append(-bounds.U_L, trip.u, trip.v)
        v_tL = bounds.U_L

    t_idx = argmax_abs_entry(grad_values)
    g_entry = float(grad_values[t_idx])
    ghat_S = lambda_S - abs(g_entry)
    dir_sparse = SparseIterate(mask)
    v_tS = 0.0
    if ghat_S < 0.0 and bounds.U_S > 0.0:
        dir_sparse.values[t_idx] = -bounds.U_S * np.sign(g_entry)
        v_tS = bounds.U_S

    return PenalizedDirection(dir_low, v_tL, dir_sparse, v_tS,
                              trip.sigma, trip.u, trip.v, t_idx, ghat_L, ghat_S)


def _min_quad_1d(h, c):
    # minimize 0.5*h*t^2 + c*t over [0, 1]; h >= 0
    if h > 0.0:
        return min(1.0, max(0.0, -c / h))
    return 0.0 if c >= 0.0 else 1.0


def _phi(pp, pq, qq, lin_a, lin_b, a, b):
    return 0.5 * (pp * a * a + 2.0 * pq * a * b + qq * b * b) + lin_a * a + lin_b * b


def _box_qp(pp, pq, qq, lin_a, lin_b):
    """Minimize the 2-D quadratic over the unit box by case enumeration."""
    candidates = []
    det = pp * qq - pq * pq
    if det > 0.0:
        a0 = (-lin_a * qq + lin_b * pq) / det
        b0 = (-lin_b * pp + lin_a * pq) / det
        if 0.0 <= a0 <= 1.0 and 0.0 <= b0 <= 1.0:
            candidates.append((a0, b0))
    candidates.append((0.0, _min_quad_1d(qq, lin_b)))
    candidates.append((1.0, _min_quad_1d(qq, lin_b + pq)))
    candidates.append((_min_quad_1d(pp, lin_a), 0.0))
    candidates.append((_min_quad_1d(pp, lin_a + pq), 1.0))
    candidates.extend([(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)])
    best = min(candidates, key=lambda ab: _phi(pp, pq, qq, lin_a, lin_b, *ab))
    return best


def _line_search_coefficients(r, p, q, dt_L, dt_S, lambda_L, lambda_S):
    pp = float(np.dot(p, p))
    qq = float(np.dot(q, q))
    pq = float(np.dot(p, q))
    lin_a = float(np.dot(r, p)) + lambda_L * dt_L
    lin_b = float(np.dot(r, q)) + lambda_S * dt_S
    return pp, pq, qq, lin_a, lin_b


def exact_line_search(mask, r_vals, l_vals, s_vals, t_L, t_S, direction,
                      lambda_L, lambda_S):
    """Minimize g over the product of segments [x_k, v_k]; returns (a, b).

    a moves the low-rank pair (L, t_L), b the sparse pair (S, t_S); the
    restriction is a two-dimensional quadratic over the unit box, solved
    exactly by stationary-point / edge / corner enumeration.
    """
    p = direction.low_rank.omega_values(mask) - l_vals
    q = direction.sparse.values - s_vals
    coeffs = _line_search_coefficients(p=p, q=q, r=r_vals,
                                       dt_L=direction.v_tL - t_L,
                                       dt_S=direction.v_tS - t_S,
                                       lambda_L=lambda_L, lambda_S=lambda_S)
    return _box_qp(*coeffs)


def prox_step_sparse(s_half, r_half, lambda_S):
    """Soft-threshold step S <- T_lambda[S - R] on the mask."""
    return SparseIterate(s_half.mask,
                         soft_threshold(s_half.values - r_half.values, lambda_S))


def solve_fw_penalized(problem, config, seed=0, check_every=100):
    """Plain Frank-Wolfe on the bounded epigraph problem.

    Fixed 2/(k+2) schedule, static bounds from the zero solution, runs
    to max_iter (no stall rule).
    """
    return _solve_penalized(problem, config, thresholding=False,
                            seed=seed, check_every=check_every)


def solve_fwt(problem, config, seed=0, check_every=100):
    """FW-T: line-searched FW step, prox step on S, adaptive bounds,
    and the stall-window stopping rule."""
    return _solve_penalized(problem, config, thresholding=True,
                            seed=seed, check_every=check_every)


def _solve_penalized(problem, config, thresholding, seed, check_every):
    pen = problem.require_penalized()
    if (config.lambda_L, config.lambda_S) != (pen.lambda_L, pen.lambda_S):
        raise ValueError("config weights disagree with the problem formulation")
    lam_L, lam_S = pen.lambda_L, pen.lambda_S
    mask = problem.mask
    m, n = mask.shape
    m_vals = problem.observed
    m_norm = float(np.linalg.norm(m_vals))

    low_rank = LowRankIterate(m, n, with_dense_cache=(m * n <= DENSE_CACHE_LIMIT))
    sparse = SparseIterate(mask)
    l_vals = np.zeros(mask.nnz)
    s_vals = sparse.values
    t_L = 0.0
    t_S = 0.0

    bounds = initial_bounds(problem)
    g0 = bounds.U_L * lam_L
    g = g0
    trace = SolverTrace()
    if g0 == 0.0:
        # M vanishes on the mask: zero is optimal
        trace.append(IterationRecord(0, objective=0.0, rank=0, nnz=0,
                                     U_L=0.0, U_S=0.0))
        return low_rank, sparse, trace

    recent = deque([g0], maxlen=config.stall_window + 1)
    warm_v = None

    for k in range(config.max_iter):
        t0 = time.perf_counter_ns()
        r = l_vals + s_vals - m_vals
        direction = fw_direction_penalized(mask, r, lam_L, lam_S, bounds,
                                           seed=substream(seed, k), v0=warm_v)
        warm_v = direction.v

        base = float(np.dot(l_vals, r) + np.dot(s_vals, r)) + lam_L * t_L + lam_S * t_S
        gap = base - (direction.v_tL * direction.ghat_L
                      + direction.v_tS * direction.ghat_S)

        rank_k = low_rank.rank
        nnz_k = sparse.nnz
        u_Lk, u_Sk = bounds.U_L, bounds.U_S

        if thresholding:
            vl_vals = direction.low_rank.omega_values(mask)
            p = vl_vals - l_vals
            q = direction.sparse.values - s_vals
            qp = _line_search_coefficients(r, p, q,
                                           direction.v_tL - t_L,
                                           direction.v_tS - t_S, lam_L, lam_S)
            a, b = _box_qp(*qp)
        else:
            a = b = fw_step_size(k)

        # convex-combination updates (factored L mirrors l_vals)
        low_rank.scale(1.0 - a)
        l_vals *= 1.0 - a
        if direction.active_L and a > 0.0:
            low_rank.append(-a * bounds.U_L, direction.u, direction.v)
            add_rank_one(l_vals, mask, a, -bounds.U_L, direction.u, direction.v)
        t_L = (1.0 - a) * t_L + a * direction.v_tL

        s_vals *= 1.0 - b
        if direction.active_S and b > 0.0:
            s_vals[direction.entry] += b * direction.sparse.values[direction.entry]
        t_S_half = (1.0 - b) * t_S + b * direction.v_tS

        if thresholding:
            r_half = l_vals + s_vals - m_vals
            g_half = (problem.data_term(r_half)
                      + lam_L * t_L + lam_S * t_S_half)
            if g_half > g + _DESCENT_TOL * g0:
                raise RuntimeError(
                    f"line-search step increased g at k={k}: {g_half!r} > {g!r}")
            s_vals[:] = soft_threshold(s_vals - r_half, lam_S)
            t_S = l1_norm(s_vals)
            g_next = (problem.data_term(l_vals + s_vals - m_vals)
                      + lam_L * t_L + lam_S * t_S)
            if g_next > g_half + _DESCENT_TOL * g0:
                raise RuntimeError(
                    f"prox step increased g at k={k}: {g_next!r} > {g_half!r}")
            bounds = update_bounds(bounds, g_next, lam_L, lam_S)
        else:
            t_S = t_S_half
            g_next = (problem.data_term(l_vals + s_vals - m_vals)
                      + lam_L * t_L + lam_S * t_S)

        trace.append(IterationRecord(k, objective=g, dual_gap=gap,
                                     step_a=a, step_b=b, rank=rank_k, nnz=nnz_k,
                                     wall_nanos=time.perf_counter_ns() - t0,
                                     U_L=u_Lk, U_S=u_Sk))
        g = g_next

        if (k + 1) % 256 == 0:
            low_rank.compress()
        if check_every and (k + 1) % check_every == 0:
            incremental = Residual(mask, l_vals + s_vals - m_vals)
            scratch = Residual.compute(mask, low_rank, sparse, m_vals)
            scale = low_rank.frobenius_norm() + sparse.frobenius_norm() + m_norm
            incremental.check_against(scratch, scale)

        if thresholding:
            recent.append(g)
            if g < 1e-14 * g0:
                break
            if len(recent) == config.stall_window + 1 and stopping_check(recent, config.epsilon):
                break

    low_rank.compress()
    final_k = trace.final().k + 1
    trace.append(IterationRecord(final_k, objective=g, rank=low_rank.rank,
                                 nnz=sparse.nnz, U_L=bounds.U_L, U_S=bounds.U_S))
    return low_rank, sparse, trace
