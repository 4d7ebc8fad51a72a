"""Problem data for compressive principal component pursuit.

Both flavors share the data term 0.5 * ||P[L + S - M]||_F^2 over the
observed entries; the constrained form bounds the nuclear and l1 norms
by radii (tau_L, tau_S), the penalized form charges them with weights
(lambda_L, lambda_S).
"""

from dataclasses import dataclass

import numpy as np

from .numerics import squared_norm


class FormulationError(ValueError):
    """Solver or evaluator applied to the wrong problem flavor."""


@dataclass(frozen=True)
class Constrained:
    tau_L: float
    tau_S: float

    def __post_init__(self):
        if self.tau_L < 0 or self.tau_S < 0:
            raise ValueError("norm-ball radii must be nonnegative")


@dataclass(frozen=True)
class Penalized:
    lambda_L: float
    lambda_S: float

    def __post_init__(self):
        if self.lambda_L <= 0 or self.lambda_S <= 0:
            raise ValueError("penalty weights must be strictly positive")


class CpcpProblem:
    """Masked data matrix plus a formulation (Constrained or Penalized)."""

    def __init__(self, mask, observed, formulation):
        self.mask = mask
        self.observed = mask._check_values(observed).copy()
        if not np.isfinite(self.observed).all():
            raise ValueError("observed entries must be finite")
        if not isinstance(formulation, (Constrained, Penalized)):
            raise TypeError(f"unknown formulation {formulation!r}")
        self.formulation = formulation

    @classmethod
    def constrained(cls, mask, observed, tau_L, tau_S):
        return cls(mask, observed, Constrained(float(tau_L), float(tau_S)))

    @classmethod
    def penalized(cls, mask, observed, lambda_L, lambda_S):
        return cls(mask, observed, Penalized(float(lambda_L), float(lambda_S)))

    @property
    def shape(self):
        return self.mask.shape

    @property
    def is_constrained(self):
        return isinstance(self.formulation, Constrained)

    @property
    def is_penalized(self):
        return isinstance(self.formulation, Penalized)

    def require_constrained(self):
        if not self.is_constrained:
            raise FormulationError("expected a Constrained problem")
        return self.formulation

    def require_penalized(self):
        if not self.is_penalized:
            raise FormulationError("expected a Penalized problem")
        return self.formulation

    def observed_sq_norm(self):
        """||P[M]||_F^2 (compensated)."""
        return squared_norm(self.observed)

    def data_term(self, residual_values):
        """0.5 * ||residual||_F^2 (compensated)."""
        return 0.5 * squared_norm(residual_values)

    def residual_values(self, low_rank, sparse):
        """Scratch P[L + S - M] on the mask."""
        return low_rank.omega_values(self.mask) + sparse.values - self.observed


def eval_constrained(problem, low_rank, sparse):
    """Data-fidelity objective of the norm-constrained problem."""
    problem.require_constrained()
    return problem.data_term(problem.residual_values(low_rank, sparse))


def eval_penalized(problem, low_rank, sparse):
    """Penalized objective: data term + weighted nuclear and l1 norms."""
    pen = problem.require_penalized()
    data = problem.data_term(problem.residual_values(low_rank, sparse))
    return data + pen.lambda_L * low_rank.nuclear_norm() + pen.lambda_S * sparse.l1_norm()


def eval_epigraph(problem, x):
    """Epigraph objective: data term + lambda_L t_L + lambda_S t_S.

    Dominates eval_penalized whenever x is epigraph-feasible.
    """
    pen = problem.require_penalized()
    data = problem.data_term(problem.residual_values(x.low_rank, x.sparse))
    return data + pen.lambda_L * x.t_L + pen.lambda_S * x.t_S
