"""Small input validation helpers for the estimator and CLI surfaces."""

import numpy as np


def check_matrix(X, name="X", allow_nan=False):
    """Coerce to a 2-D float64 array; NaN marks unobserved when allowed."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {X.shape}")
    if X.shape[0] == 0 or X.shape[1] == 0:
        raise ValueError(f"{name} must be nonempty, got shape {X.shape}")
    if np.isinf(X).any():
        raise ValueError(f"{name} contains infinities")
    if not allow_nan and np.isnan(X).any():
        raise ValueError(f"{name} contains NaN")
    return X


def check_positive(value, name):
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def check_nonnegative(value, name):
    value = float(value)
    if not value >= 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")
    return value
