"""Compensated accumulation for objective values.

Descent inequalities in the solvers are asserted to 1e-10-relative
tolerances, so objective terms are summed block-wise and the block
partials are combined with math.fsum (exactly rounded).  The result is
deterministic and independent of any BLAS threading.
"""

import math

import numpy as np

_BLOCK = 4096


def exact_block_sum(values):
    """Sum a 1-D float array: sequential within 4096-blocks, fsum across."""
    v = np.ascontiguousarray(values, dtype=np.float64)
    if v.size == 0:
        return 0.0
    if v.size <= _BLOCK:
        return math.fsum(v.tolist())
    partials = np.add.reduceat(v, np.arange(0, v.size, _BLOCK))
    return math.fsum(partials.tolist())


def squared_norm(values):
    """Compensated sum of squares."""
    return exact_block_sum(np.square(values))


def l1_norm(values):
    """Compensated sum of absolute values."""
    return exact_block_sum(np.abs(values))
