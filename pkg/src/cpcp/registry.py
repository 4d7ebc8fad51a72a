"""Name-based solver dispatch shared by the CLI, the benchmark harness
and the estimator wrapper."""

from .baselines import IstaConfig, solve_fista, solve_ista
from .fw import ConstrainedConfig, solve_fw_constrained, solve_fwp
from .fwt import PenalizedConfig, solve_fw_penalized, solve_fwt

CONSTRAINED_ALGOS = ("fw", "fwp")
PENALIZED_ALGOS = ("fw-pen", "fwt")
PROX_ALGOS = ("ista", "fista")
ALL_ALGOS = CONSTRAINED_ALGOS + PENALIZED_ALGOS + PROX_ALGOS

_CONFIG_TYPES = {
    "fw": ConstrainedConfig, "fwp": ConstrainedConfig,
    "fw-pen": PenalizedConfig, "fwt": PenalizedConfig,
    "ista": IstaConfig, "fista": IstaConfig,
}

_SOLVERS = {
    "fw": solve_fw_constrained, "fwp": solve_fwp,
    "fw-pen": solve_fw_penalized, "fwt": solve_fwt,
    "ista": solve_ista, "fista": solve_fista,
}


def config_type(algo):
    if algo not in _CONFIG_TYPES:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {ALL_ALGOS}")
    return _CONFIG_TYPES[algo]


def make_config(algo, params):
    """Build the right config dataclass from a plain dict (CLI JSON)."""
    cls = config_type(algo)
    fields = cls.__dataclass_fields__
    unknown = set(params) - set(fields)
    if unknown:
        raise ValueError(f"unknown config fields for {algo}: {sorted(unknown)}")
    return cls(**params)


def solve(algo, problem, config, seed=0):
    """Run a solver by name; returns (low_rank, sparse, trace)."""
    if algo not in _SOLVERS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {ALL_ALGOS}")
    if algo in PROX_ALGOS:
        return _SOLVERS[algo](problem, config)
    return _SOLVERS[algo](problem, config, seed=seed)
