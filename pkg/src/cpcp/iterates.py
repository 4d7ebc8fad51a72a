"""Iterate representations: factored low-rank term, mask-supported sparse
term, and the mask-restricted residual.

The low-rank iterate accumulates rank-one terms (one per Frank-Wolfe
step) and only densifies on demand, which is what keeps the solvers'
per-iteration cost linear in the number of observed entries.
"""

import numpy as np

from .numerics import l1_norm

_UNIT_TOL = 1e-8


def _check_unit(vec, name):
    nrm = float(np.linalg.norm(vec))
    if abs(nrm - 1.0) > _UNIT_TOL:
        raise ValueError(f"{name} must be a unit vector, got norm {nrm!r}")


def add_rank_one(values, mask, gamma, scale, u, v):
    """In-place update values += gamma * scale * (u v^T on the mask).

    This is the O(|mask|) kernel behind every low-rank step; u and v
    must be unit vectors.
    """
    if gamma == 0.0 or scale == 0.0:
        return values
    _check_unit(u, "u")
    _check_unit(v, "v")
    values += (gamma * scale) * mask.rank_one_values(u, v)
    return values


class LowRankIterate:
    """Sum of rank-one terms c_i * u_i v_i^T with unit u_i, v_i.

    Terms are appended into preallocated column blocks (amortized
    doubling).  An optional dense cache mirrors every affine update so
    that desk-scale consumers can read full entries cheaply.
    """

    def __init__(self, m, n, with_dense_cache=False):
        self.m = int(m)
        self.n = int(n)
        cap = 8
        self._left = np.zeros((self.m, cap))
        self._right = np.zeros((self.n, cap))
        self._coeffs = np.zeros(cap)
        self._r = 0
        self._cache = np.zeros((self.m, self.n)) if with_dense_cache else None

    @classmethod
    def from_factors(cls, left, coeffs, right, with_dense_cache=False):
        """Build from existing unit-column factors (columns are copied)."""
        left = np.atleast_2d(np.asarray(left, dtype=np.float64))
        right = np.atleast_2d(np.asarray(right, dtype=np.float64))
        coeffs = np.atleast_1d(np.asarray(coeffs, dtype=np.float64))
        out = cls(left.shape[0], right.shape[0], with_dense_cache=with_dense_cache)
        for i in range(coeffs.size):
            out.append(coeffs[i], left[:, i], right[:, i])
        return out

    @property
    def rank(self):
        return self._r

    @property
    def left(self):
        return self._left[:, : self._r]

    @property
    def right(self):
        return self._right[:, : self._r]

    @property
    def coeffs(self):
        return self._coeffs[: self._r]

    @property
    def has_dense_cache(self):
        return self._cache is not None

    def scale(self, alpha):
        """L <- alpha * L."""
        self._coeffs[: self._r] *= alpha
        if self._cache is not None:
            self._cache *= alpha

    def append(self, coeff, u, v):
        """L <- L + coeff * u v^T (u, v unit vectors)."""
        if coeff == 0.0:
            return
        _check_unit(u, "u")
        _check_unit(v, "v")
        if self._r == self._coeffs.size:
            self._grow()
        self._left[:, self._r] = u
        self._right[:, self._r] = v
        self._coeffs[self._r] = coeff
        self._r += 1
        if self._cache is not None:
            self._cache += coeff * np.outer(u, v)

    def _grow(self):
        cap = 2 * self._coeffs.size
        for name in ("_left", "_right"):
            old = getattr(self, name)
            new = np.zeros((old.shape[0], cap))
            new[:, : self._r] = old[:, : self._r]
            setattr(self, name, new)
        coeffs = np.zeros(cap)
        coeffs[: self._r] = self._coeffs[: self._r]
        self._coeffs = coeffs

    def compress(self, rel_tol=1e-14):
        """Drop terms with |coeff| below rel_tol times the largest."""
        if self._r == 0:
            return
        c = np.abs(self._coeffs[: self._r])
        keep = c >= rel_tol * c.max()
        if keep.all():
            return
        k = int(keep.sum())
        self._left[:, :k] = self._left[:, : self._r][:, keep]
        self._right[:, :k] = self._right[:, : self._r][:, keep]
        self._coeffs[:k] = self._coeffs[: self._r][keep]
        self._r = k

    def densify(self):
        """Full m-by-n matrix (copy)."""
        if self._cache is not None:
            return self._cache.copy()
        if self._r == 0:
            return np.zeros((self.m, self.n))
        return (self.left * self.coeffs) @ self.right.T

    def omega_values(self, mask):
        """L restricted to the mask, recomputed from the factors."""
        if self._r == 0:
            return np.zeros(mask.nnz)
        if mask.is_full:
            return self.densify().ravel()
        rows, cols = mask.rows, mask.cols
        out = np.zeros(mask.nnz)
        # rank-blocked to bound the |mask| x r temporary
        for lo in range(0, self._r, 128):
            hi = min(lo + 128, self._r)
            out += (self._left[rows, lo:hi] * self._right[cols, lo:hi]) @ self._coeffs[lo:hi]
        return out

    def frobenius_norm(self):
        if self._r == 0:
            return 0.0
        if self._cache is not None:
            return float(np.linalg.norm(self._cache))
        if self._r <= 512:
            # ||L||_F^2 = c^T (U^T U . V^T V) c without densifying
            gu = self.left.T @ self.left
            gv = self.right.T @ self.right
            val = self.coeffs @ (gu * gv) @ self.coeffs
            return float(np.sqrt(max(val, 0.0)))
        # high accumulated rank: compress through QR before taking the norm
        _, rl = np.linalg.qr(self.left * self.coeffs)
        return float(np.linalg.norm(rl @ self.right.T))

    def singular_values(self):
        """Exact singular values via QR of the factors (O((m+n)r^2))."""
        if self._r == 0:
            return np.zeros(0)
        _, rl = np.linalg.qr(self.left * self.coeffs)
        _, rr = np.linalg.qr(self.right)
        return np.linalg.svd(rl @ rr.T, compute_uv=False)

    def nuclear_norm(self):
        return float(self.singular_values().sum())

    def nuclear_norm_upper(self):
        """Sum of |coeffs|; upper-bounds the nuclear norm."""
        return float(np.abs(self.coeffs).sum())

    def check_cache_consistency(self, rel_tol=1e-12):
        """Verify dense cache == factor sum within rel_tol * ||L||_F."""
        if self._cache is None:
            return
        exact = (self.left * self.coeffs) @ self.right.T if self._r else np.zeros((self.m, self.n))
        scale = max(np.linalg.norm(exact), 1e-300)
        err = np.linalg.norm(self._cache - exact)
        if err > rel_tol * scale:
            raise RuntimeError(f"dense cache drifted from factors: {err:.3e} > {rel_tol * scale:.3e}")


class SparseIterate:
    """Sparse term stored only on the observation mask.

    Starting from zero and applying only mask-supported updates keeps
    the support inside the mask by construction.
    """

    def __init__(self, mask, values=None):
        self.mask = mask
        if values is None:
            self.values = np.zeros(mask.nnz)
        else:
            self.values = mask._check_values(values).copy()

    @property
    def nnz(self):
        return int(np.count_nonzero(self.values))

    def l1_norm(self):
        return l1_norm(self.values)

    def frobenius_norm(self):
        return float(np.linalg.norm(self.values))

    def to_dense(self):
        return self.mask.scatter(self.values)

    def copy(self):
        return SparseIterate(self.mask, self.values)


class Residual:
    """P[L + S - M] on the mask, maintained incrementally by solvers."""

    def __init__(self, mask, values):
        self.mask = mask
        self.values = mask._check_values(values)

    @classmethod
    def compute(cls, mask, low_rank, sparse, observed):
        """Scratch recomputation from the current iterates."""
        vals = low_rank.omega_values(mask) + sparse.values - observed
        return cls(mask, vals)

    def apply_rank_one(self, gamma, scale, u, v):
        """Accumulate gamma * scale * (u v^T on the mask); O(|mask|)."""
        add_rank_one(self.values, self.mask, gamma, scale, u, v)
        return self

    def check_against(self, other, scale, rel_tol=1e-9):
        """Error guard: incremental vs scratch residual agreement."""
        err = float(np.linalg.norm(self.values - other.values))
        if err > rel_tol * max(scale, 1e-300):
            raise RuntimeError(
                f"incremental residual drifted: {err:.3e} > {rel_tol * scale:.3e}")


class EpigraphIterate:
    """State (L, S, t_L, t_S) of the epigraph-form penalized problem."""

    def __init__(self, low_rank, sparse, t_L, t_S):
        if t_L < 0 or t_S < 0:
            raise ValueError("epigraph variables must be nonnegative")
        self.low_rank = low_rank
        self.sparse = sparse
        self.t_L = float(t_L)
        self.t_S = float(t_S)

    def check_feasible(self, tol=1e-8):
        nuc = self.low_rank.nuclear_norm()
        if nuc > self.t_L + tol * max(1.0, self.t_L):
            raise ValueError(f"nuclear norm {nuc} exceeds t_L={self.t_L}")
        l1 = self.sparse.l1_norm()
        if l1 > self.t_S + tol * max(1.0, self.t_S):
            raise ValueError(f"l1 norm {l1} exceeds t_S={self.t_S}")
        return True
