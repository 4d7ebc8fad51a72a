"""Compressive principal component pursuit solvers.

Frank-Wolfe / proximal hybrids (FW, FW-P, FW on the penalized epigraph,
FW-T) with linear per-iteration cost, plus ISTA/FISTA baselines, a
synthetic benchmark harness, MatrixMarket / CSV I/O, a CLI and a
scikit-learn style estimator.
"""

import os as _os

# CPCP_THREADS caps internal data parallelism (BLAS pools); default 1 so
# reductions stay deterministic.  Must happen before numpy loads, so it
# only takes effect when cpcp is imported first.
_threads = _os.environ.get("CPCP_THREADS", "1")
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    _os.environ.setdefault(_var, _threads)

from .mask import ObservationMask, project_onto_mask, sample_mask
from .iterates import EpigraphIterate, LowRankIterate, Residual, SparseIterate, add_rank_one
from .problem import (Constrained, CpcpProblem, FormulationError, Penalized,
                      eval_constrained, eval_epigraph, eval_penalized)
from .trace import IterationRecord, SolverTrace
from .oracles import (SingularTriplet, jacobi_svd, leading_singular_pair,
                      lmo_l1, lmo_nuclear, project_l1,
                      singular_value_threshold, soft_threshold, sv_heuristic)
from .fw import ConstrainedConfig, duality_gap, fw_step_size, solve_fw_constrained, solve_fwp
from .fwt import (BoundState, PenalizedConfig, exact_line_search,
                  fw_direction_penalized, initial_bounds, prox_step_sparse,
                  solve_fw_penalized, solve_fwt, stopping_check, update_bounds)
from .baselines import IstaConfig, solve_fista, solve_ista
from .synthetic import GroundTruth, SyntheticSpec, default_weights, gen_synthetic
from .matio import MatrixMarketError, export_trace, load_matrix, load_trace, save_matrix
from .bench import bench_per_iteration, growth_per_doubling
from .estimators import CompressivePCP

__version__ = "0.1.0"

__all__ = [
    "ObservationMask", "project_onto_mask", "sample_mask",
    "EpigraphIterate", "LowRankIterate", "Residual", "SparseIterate", "add_rank_one",
    "Constrained", "CpcpProblem", "FormulationError", "Penalized",
    "eval_constrained", "eval_epigraph", "eval_penalized",
    "IterationRecord", "SolverTrace",
    "SingularTriplet", "jacobi_svd", "leading_singular_pair",
    "lmo_l1", "lmo_nuclear", "project_l1",
    "singular_value_threshold", "soft_threshold", "sv_heuristic",
    "ConstrainedConfig", "duality_gap", "fw_step_size", "solve_fw_constrained", "solve_fwp",
    "BoundState", "PenalizedConfig", "exact_line_search", "fw_direction_penalized",
    "initial_bounds", "prox_step_sparse", "solve_fw_penalized", "solve_fwt",
    "stopping_check", "update_bounds",
    "IstaConfig", "solve_fista", "solve_ista",
    "GroundTruth", "SyntheticSpec", "default_weights", "gen_synthetic",
    "MatrixMarketError", "export_trace", "load_matrix", "load_trace", "save_matrix",
    "bench_per_iteration", "growth_per_doubling",
    "CompressivePCP",
]
