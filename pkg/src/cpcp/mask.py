"""Observation masks and the entrywise projection operator.

A mask is the index set of observed entries, stored row-major sorted.
Every mask-supported quantity in the package (observed data, sparse
iterates, residuals) is a flat float array aligned with that order, so
all elementwise work costs O(|mask|) and reductions are deterministic.
"""

import numpy as np
from scipy.sparse import csr_matrix

from .rng import SplitMix64


class ObservationMask:
    """Set of observed (i, j) positions of an m-by-n matrix.

    Construction validates index ranges, rejects duplicates and empty
    masks, and sorts entries row-major.  Full masks (every entry
    observed) skip the index arrays entirely and use reshapes instead.
    """

    def __init__(self, shape, row_idx=None, col_idx=None):
        m, n = int(shape[0]), int(shape[1])
        if m <= 0 or n <= 0:
            raise ValueError(f"matrix shape must be positive, got {(m, n)}")
        self.shape = (m, n)
        if row_idx is None and col_idx is None:
            # full observation
            self._linear = None
            self._nnz = m * n
            return
        rows = np.asarray(row_idx, dtype=np.int64).ravel()
        cols = np.asarray(col_idx, dtype=np.int64).ravel()
        if rows.shape != cols.shape:
            raise ValueError("row and column index arrays differ in length")
        if rows.size == 0:
            raise ValueError("empty observation mask is not allowed")
        if rows.min() < 0 or rows.max() >= m or cols.min() < 0 or cols.max() >= n:
            raise ValueError("mask indices out of range")
        linear = rows * n + cols
        linear = np.sort(linear)
        if linear.size > 1 and np.any(np.diff(linear) == 0):
            raise ValueError("duplicate entries in observation mask")
        self._nnz = int(linear.size)
        if self._nnz == m * n:
            self._linear = None
        else:
            self._linear = linear

    @classmethod
    def full(cls, m, n):
        return cls((m, n))

    @classmethod
    def from_dense_bool(cls, keep):
        keep = np.asarray(keep, dtype=bool)
        rows, cols = np.nonzero(keep)
        return cls(keep.shape, rows, cols)

    @property
    def is_full(self):
        return self._linear is None

    @property
    def nnz(self):
        return self._nnz

    def __len__(self):
        return self._nnz

    @property
    def rho(self):
        m, n = self.shape
        return self._nnz / (m * n)

    @property
    def linear_indices(self):
        if self._linear is None:
            return np.arange(self.shape[0] * self.shape[1], dtype=np.int64)
        return self._linear

    @property
    def rows(self):
        if self._linear is None:
            return self.linear_indices // self.shape[1]
        cached = getattr(self, "_rows_cache", None)
        if cached is None:
            cached = self._linear // self.shape[1]
            self._rows_cache = cached
        return cached

    @property
    def cols(self):
        if self._linear is None:
            return self.linear_indices % self.shape[1]
        cached = getattr(self, "_cols_cache", None)
        if cached is None:
            cached = self._linear % self.shape[1]
            self._cols_cache = cached
        return cached

    def entry_position(self, t):
        """(i, j) of the t-th entry in row-major order."""
        if self._linear is None:
            return divmod(int(t), self.shape[1])
        return divmod(int(self._linear[t]), self.shape[1])

    def project(self, dense):
        """P applied to a dense matrix: the observed values, mask order."""
        dense = np.asarray(dense, dtype=np.float64)
        if dense.shape != self.shape:
            raise ValueError(f"expected shape {self.shape}, got {dense.shape}")
        if self._linear is None:
            return dense.ravel().copy()
        return dense.ravel()[self._linear].copy()

    def scatter(self, values):
        """Dense matrix with `values` on the mask and zeros elsewhere."""
        values = self._check_values(values)
        if self._linear is None:
            return values.reshape(self.shape).copy()
        out = np.zeros(self.shape[0] * self.shape[1])
        out[self._linear] = values
        return out.reshape(self.shape)

    def rank_one_values(self, u, v):
        """u v^T restricted to the mask, as a flat value array."""
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        if u.shape != (self.shape[0],) or v.shape != (self.shape[1],):
            raise ValueError("vector lengths do not match mask shape")
        if self._linear is None:
            return np.outer(u, v).ravel()
        return u[self.rows] * v[self.cols]

    def operator(self, values):
        """The matrix holding `values` on the mask, as a multipliable object.

        Full masks return a dense reshape view (BLAS products); partial
        masks return a CSR matrix over a cached structure, so building
        and applying it costs O(|mask|).
        """
        values = self._check_values(values)
        m, n = self.shape
        if self._linear is None:
            return values.reshape(m, n)
        indptr, indices = self._csr_structure()
        return csr_matrix((values, indices, indptr), shape=(m, n))

    def _csr_structure(self):
        cached = getattr(self, "_csr_cache", None)
        if cached is None:
            m, n = self.shape
            counts = np.bincount(self.rows, minlength=m)
            indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
            indices = (self._linear % n).astype(np.int32 if n < 2**31 else np.int64)
            cached = (indptr, indices)
            self._csr_cache = cached
        return cached

    def _check_values(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self._nnz,):
            raise ValueError(f"expected {self._nnz} mask values, got shape {values.shape}")
        return values

    def __eq__(self, other):
        if not isinstance(other, ObservationMask):
            return NotImplemented
        if self.shape != other.shape or self._nnz != other._nnz:
            return False
        if self.is_full and other.is_full:
            return True
        return bool(np.array_equal(self.linear_indices, other.linear_indices))

    def __repr__(self):
        return f"ObservationMask(shape={self.shape}, nnz={self._nnz}, rho={self.rho:.4g})"


def project_onto_mask(mask, dense):
    """Observed entries of a dense matrix, in mask order."""
    return mask.project(dense)


def sample_mask(m, n, rho, seed):
    """Uniform mask without replacement with exactly round(rho*m*n) entries.

    Deterministic in the seed: entries are the argsort of a SplitMix64
    key per position.
    """
    if not 0.0 < rho <= 1.0:
        raise ValueError(f"sampling ratio must be in (0, 1], got {rho}")
    if rho == 1.0:
        return ObservationMask.full(m, n)
    count = int(round(rho * m * n))
    if count == 0:
        raise ValueError(f"rho={rho} rounds to an empty mask for shape {(m, n)}")
    if count == m * n:
        return ObservationMask.full(m, n)
    keys = SplitMix64(seed).next_u64(m * n)
    linear = np.argsort(keys, kind="stable")[:count]
    return ObservationMask((m, n), linear // n, linear % n)
