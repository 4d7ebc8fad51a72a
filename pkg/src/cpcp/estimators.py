"""scikit-learn style front end.

CompressivePCP wraps the solver library as a transformer: fit(X)
decomposes the (possibly partially observed) matrix into low-rank and
sparse parts, transform returns the low-rank reconstruction.  Missing
entries can be given either as NaNs in X or as a boolean mask, so the
estimator drops into pipelines that pass matrices around.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .mask import ObservationMask
from .problem import CpcpProblem
from .registry import CONSTRAINED_ALGOS, PROX_ALGOS, ALL_ALGOS, make_config, solve
from .synthetic import default_weights
from .validation import check_matrix


class CompressivePCP(BaseEstimator, TransformerMixin):
    """Low-rank + sparse decomposition from partial observations.

    Parameters
    ----------
    method : one of 'fw', 'fwp', 'fw-pen', 'fwt', 'ista', 'fista'
        'fw'/'fwp' solve the norm-constrained problem and need tau_L and
        tau_S; the others solve the penalized problem.
    lambda_L, lambda_S : float, optional
        Penalty weights.  When omitted they are derived from the data
        with the `delta` scaling rule.
    delta : float
        Scale of the automatic weights (0.01 is a robust default).
    tau_L, tau_S : float, optional
        Ball radii for the constrained methods.
    max_iter : int
    epsilon : float
        Relative-decrease stall tolerance of the 'fwt' stopping rule.
    gap_tol : float, optional
        Duality-gap stopping threshold for 'fw'/'fwp'.
    random_state : int
        Seed for the power-iteration starts.

    Attributes
    ----------
    low_rank_ : LowRankIterate
    sparse_ : SparseIterate
    trace_ : SolverTrace
    n_iter_ : int
    objective_ : float
    """

    def __init__(self, method="fwt", lambda_L=None, lambda_S=None, delta=0.01,
                 tau_L=None, tau_S=None, max_iter=300, epsilon=1e-3,
                 stall_window=5, gap_tol=None, record_gap_every=1,
                 target_objective=None, random_state=0):
        self.method = method
        self.lambda_L = lambda_L
        self.lambda_S = lambda_S
        self.delta = delta
        self.tau_L = tau_L
        self.tau_S = tau_S
        self.max_iter = max_iter
        self.epsilon = epsilon
        self.stall_window = stall_window
        self.gap_tol = gap_tol
        self.record_gap_every = record_gap_every
        self.target_objective = target_objective
        self.random_state = random_state

    def _build_problem(self, X, mask):
        X = check_matrix(X, allow_nan=True)
        if mask is None:
            observed_bool = ~np.isnan(X)
            if not observed_bool.any():
                raise ValueError("X has no observed entries")
            obs_mask = (ObservationMask.full(*X.shape) if observed_bool.all()
                        else ObservationMask.from_dense_bool(observed_bool))
        else:
            mask = np.asarray(mask, dtype=bool)
            if mask.shape != X.shape:
                raise ValueError("mask shape must match X")
            obs_mask = (ObservationMask.full(*X.shape) if mask.all()
                        else ObservationMask.from_dense_bool(mask))
        observed = X.ravel()[obs_mask.linear_indices]
        if np.isnan(observed).any():
            raise ValueError("observed entries must not be NaN")
        return obs_mask, observed

    def fit(self, X, y=None, mask=None):
        """Decompose X; unobserved entries are NaNs or mask==False."""
        if self.method not in ALL_ALGOS:
            raise ValueError(f"unknown method {self.method!r}; choose from {ALL_ALGOS}")
        obs_mask, observed = self._build_problem(X, mask)

        if self.method in CONSTRAINED_ALGOS:
            if self.tau_L is None or self.tau_S is None:
                raise ValueError(f"method {self.method!r} needs tau_L and tau_S")
            problem = CpcpProblem.constrained(obs_mask, observed, self.tau_L, self.tau_S)
            params = {"tau_L": float(self.tau_L), "tau_S": float(self.tau_S),
                      "max_iter": self.max_iter, "gap_tol": self.gap_tol,
                      "record_gap_every": self.record_gap_every}
        else:
            if self.lambda_L is None or self.lambda_S is None:
                lam_L, lam_S = default_weights(obs_mask, observed, self.delta)
            else:
                lam_L, lam_S = float(self.lambda_L), float(self.lambda_S)
            problem = CpcpProblem.penalized(obs_mask, observed, lam_L, lam_S)
            self.lambda_L_, self.lambda_S_ = lam_L, lam_S
            if self.method in PROX_ALGOS:
                params = {"lambda_L": lam_L, "lambda_S": lam_S,
                          "max_iter": self.max_iter,
                          "target_objective": self.target_objective}
            else:
                params = {"lambda_L": lam_L, "lambda_S": lam_S,
                          "max_iter": self.max_iter, "epsilon": self.epsilon,
                          "stall_window": self.stall_window}

        config = make_config(self.method, params)
        low_rank, sparse, trace = solve(self.method, problem, config,
                                        seed=self.random_state)
        self.mask_ = obs_mask
        self.low_rank_ = low_rank
        self.sparse_ = sparse
        self.trace_ = trace
        self.n_iter_ = trace.final().k
        self.objective_ = trace.final().objective
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        """Low-rank reconstruction of the fitted matrix."""
        if not hasattr(self, "low_rank_"):
            raise RuntimeError("CompressivePCP is not fitted yet")
        X = check_matrix(X, allow_nan=True)
        if X.shape != (self.low_rank_.m, self.low_rank_.n):
            raise ValueError(f"X shape {X.shape} differs from fitted "
                             f"{(self.low_rank_.m, self.low_rank_.n)}")
        return self.low_rank_.densify()

    def sparse_dense_(self):
        """Dense sparse component of the fitted decomposition."""
        if not hasattr(self, "sparse_"):
            raise RuntimeError("CompressivePCP is not fitted yet")
        return self.sparse_.to_dense()
