"""Optimization oracles: linear minimization over nuclear/l1 balls,
l1 projection, soft-thresholding, and the SVD kernels behind them.

The leading singular pair comes from a matrix-free power iteration so
that solvers touch only mask-supported residuals.  A one-sided Jacobi
SVD is kept in-repo as the dense fallback kernel and as the independent
oracle the test suite checks the fast paths against.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import issparse
from scipy.sparse.linalg import svds

from .iterates import LowRankIterate, SparseIterate
from .rng import SplitMix64

DEFAULT_POWER_TOL = 1e-9
DEFAULT_POWER_MAX_ITER = 1000


@dataclass
class SingularTriplet:
    sigma: float
    u: np.ndarray
    v: np.ndarray
    converged: bool = True


def _operator_parts(grad, shape):
    if isinstance(grad, np.ndarray):
        if grad.ndim != 2:
            raise ValueError("gradient matrix must be 2-D")
        return grad, None, None, grad.shape
    if issparse(grad):
        return None, grad.dot, grad.T.dot, grad.shape
    matvec, rmatvec = grad
    if shape is None:
        raise ValueError("shape is required for operator-form gradients")
    return None, matvec, rmatvec, shape


def _start_vector(n, seed, v0):
    v = (np.asarray(v0, dtype=np.float64).copy() if v0 is not None
         else SplitMix64(seed).gaussians(n))
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        v = np.zeros(n)
        v[0] = 1.0
        return v
    v /= nv
    return v


def leading_singular_pair(grad, shape=None, tol=DEFAULT_POWER_TOL,
                          max_iter=DEFAULT_POWER_MAX_ITER, seed=0, v0=None):
    """Top singular triplet of a linear operator by power iteration.

    Iterates v <- normalize(A^T (A v)) from a seeded random start (or a
    caller-provided v0) and stops once the singular value estimate
    sigma_t = ||A v_t|| stabilizes: |sigma_t - sigma_{t-1}| <=
    tol * max(1, sigma_t).  Returns the best triplet with a convergence
    flag; a zero operator comes back as sigma=0, flagged.

    Parameters
    ----------
    grad : ndarray, scipy sparse matrix, or (matvec, rmatvec) pair
        The matrix, or matrix-free products x -> Ax and y -> A^T y.
    shape : (m, n), required when grad is a (matvec, rmatvec) pair.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    dense, matvec, rmatvec, (m, n) = _operator_parts(grad, shape)
    v = _start_vector(n, seed, v0)

    sigma_prev = -np.inf
    converged = False
    sqrt = math.sqrt
    if dense is not None:
        # buffered BLAS loop; this is the solvers' hot path
        dense_T = dense.T
        w = np.empty(m)
        z = np.empty(n)
        for _ in range(max_iter):
            np.dot(dense, v, out=w)
            sigma = sqrt(float(w @ w))
            if sigma == 0.0:
                break
            if abs(sigma - sigma_prev) <= tol * max(1.0, sigma):
                converged = True
                break
            sigma_prev = sigma
            np.dot(dense_T, w, out=z)
            nz = sqrt(float(z @ z))
            if nz == 0.0:
                break
            np.multiply(z, 1.0 / nz, out=v)
        av = dense @ v
    else:
        for _ in range(max_iter):
            w = matvec(v)
            sigma = sqrt(float(w @ w))
            if sigma == 0.0:
                break
            if abs(sigma - sigma_prev) <= tol * max(1.0, sigma):
                converged = True
                break
            sigma_prev = sigma
            z = rmatvec(w)
            nz = sqrt(float(z @ z))
            if nz == 0.0:
                break
            v = z / nz
        av = matvec(v)

    sigma = sqrt(float(av @ av))
    if sigma == 0.0:
        u = np.zeros(m)
        u[0] = 1.0
        return SingularTriplet(0.0, u, v, converged=False)
    return SingularTriplet(sigma, av / sigma, v, converged)


def lmo_nuclear(grad, tau, shape=None, tol=DEFAULT_POWER_TOL,
                max_iter=DEFAULT_POWER_MAX_ITER, seed=0, v0=None):
    """Minimize <G, X> over the nuclear-norm ball of radius tau.

    Returns the rank-one minimizer -tau * u v^T as a LowRankIterate and
    the attained value -tau * sigma_max(G).
    """
    if tau < 0:
        raise ValueError("nuclear-ball radius must be nonnegative")
    _, _, _, (m, n) = _operator_parts(grad, shape)
    direction = LowRankIterate(m, n)
    if tau == 0.0:
        return direction, 0.0
    trip = leading_singular_pair(grad, shape=shape, tol=tol,
                                 max_iter=max_iter, seed=seed, v0=v0)
    if trip.sigma > 0.0:
        direction.append(-tau, trip.u, trip.v)
    return direction, -tau * trip.sigma


def argmax_abs_entry(values):
    """Index of the largest-magnitude entry; first (row-major) wins ties."""
    if values.size == 0:
        raise ValueError("empty gradient")
    return int(np.argmax(np.abs(values)))


def lmo_l1(mask, values, tau):
    """Minimize <G, X> over the l1 ball of radius tau, G mask-supported.

    Returns the one-sparse minimizer -tau * sign(G[i*, j*]) e_i e_j^T
    (as a SparseIterate) and the attained value -tau * max|G|.
    """
    if tau < 0:
        raise ValueError("l1-ball radius must be nonnegative")
    values = mask._check_values(values)
    direction = SparseIterate(mask)
    if tau == 0.0:
        return direction, 0.0
    t = argmax_abs_entry(values)
    g = values[t]
    if g != 0.0:
        direction.values[t] = -tau * math.copysign(1.0, g)
    return direction, -tau * abs(g)


def project_l1(values, beta):
    """Euclidean projection onto the l1 ball of radius beta.

    Sort-and-threshold: if radius is not already satisfied, shrink by
    the unique theta with sum(max(|y| - theta, 0)) = beta.
    """
    if beta < 0:
        raise ValueError("l1-ball radius must be nonnegative")
    values = np.asarray(values, dtype=np.float64)
    if beta == 0.0:
        return np.zeros_like(values)
    a = np.abs(values)
    if a.sum() <= beta:
        return values.copy()
    s = np.sort(a.ravel())[::-1]
    css = np.cumsum(s)
    counts = np.arange(1, s.size + 1)
    above = s > (css - beta) / counts
    rho = int(np.nonzero(above)[0].max())
    theta = (css[rho] - beta) / (rho + 1)
    return np.sign(values) * np.maximum(a - theta, 0.0)


def soft_threshold(values, lam):
    """Elementwise sign(y) * max(|y| - lam, 0)."""
    if lam < 0:
        raise ValueError("threshold must be nonnegative")
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.maximum(np.abs(values) - lam, 0.0)


def jacobi_svd(A, tol=1e-12, max_sweeps=60):
    """Full SVD by one-sided Jacobi rotations.

    Self-contained dense kernel used as the correctness anchor for the
    fast SVD paths.  Returns (U, s, Vt) with s descending; columns of U
    belonging to exactly-zero singular values are left as zeros.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise ValueError("need a nonempty 2-D matrix")
    transposed = A.shape[0] < A.shape[1]
    G = (A.T if transposed else A).copy()
    n = G.shape[1]
    V = np.eye(n)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp = G[:, p]
                gq = G[:, q]
                app = float(gp @ gp)
                aqq = float(gq @ gq)
                apq = float(gp @ gq)
                if abs(apq) <= tol * math.sqrt(app * aqq) or apq == 0.0:
                    continue
                rotated = True
                zeta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                new_p = c * gp - s * gq
                new_q = s * gp + c * gq
                G[:, p] = new_p
                G[:, q] = new_q
                vp = V[:, p].copy()
                V[:, p] = c * vp - s * V[:, q]
                V[:, q] = s * vp + c * V[:, q]
        if not rotated:
            break
    sig = np.linalg.norm(G, axis=0)
    order = np.argsort(-sig, kind="stable")
    sig = sig[order]
    G = G[:, order]
    V = V[:, order]
    U = np.zeros_like(G)
    nonzero = sig > 0
    U[:, nonzero] = G[:, nonzero] / sig[nonzero]
    if transposed:
        return V, sig, U.T
    return U, sig, V.T


def singular_value_threshold(Y, tau, sv_hint, seed=0):
    """Shrink singular values: keep sigma_i > tau as (sigma_i - tau).

    Computes a partial SVD of the top sv_hint triplets and escalates to
    a full SVD when the smallest computed value still exceeds tau (more
    may be hiding below).  Returns the shrunk matrix as a factored
    LowRankIterate plus svp, the number of values above the threshold.
    """
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[0] == 0 or Y.shape[1] == 0:
        raise ValueError("need a nonempty 2-D matrix")
    m, n = Y.shape
    d = min(m, n)
    sv_hint = int(min(max(sv_hint, 1), d))

    u = s = vt = None
    if sv_hint < d and d > 16:
        try:
            v0 = SplitMix64(seed).gaussians(d)
            u, s, vt = svds(Y, k=sv_hint, v0=v0)
            order = np.argsort(-s, kind="stable")
            u, s, vt = u[:, order], s[order], vt[order]
            if s[-1] > tau:
                u = s = vt = None  # escalate: threshold not reached yet
        except Exception:
            u = s = vt = None
    if s is None:
        u, s, vt = np.linalg.svd(Y, full_matrices=False)

    svp = int(np.count_nonzero(s > tau))
    shrunk = LowRankIterate.from_factors(u[:, :svp], s[:svp] - tau, vt[:svp].T)
    return shrunk, svp


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def initial_sv(d):
    """Starting partial-SVD width: a tenth of the small dimension."""
    return max(1, _round_half_up(d / 10.0))


def sv_heuristic(sv_k, svp_k, d):
    """Next partial-SVD width from the current width and hit count.

    Grow gently (svp+1) while the threshold cuts inside the computed
    window, jump by 5% of d once the window is saturated.
    """
    if not 1 <= sv_k <= d:
        raise ValueError(f"sv must be in [1, {d}], got {sv_k}")
    if not 0 <= svp_k <= sv_k:
        raise ValueError(f"svp must be in [0, {sv_k}], got {svp_k}")
    if svp_k < sv_k:
        return min(svp_k + 1, d)
    return min(svp_k + _round_half_up(0.05 * d), d)
