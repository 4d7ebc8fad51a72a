"""Synthetic low-rank + sparse + noise instances and default weights.

The recipe follows the standard simulation setup: L0 is a product of
two standard-normal factors, S0 has Bernoulli support with amplified
normal values, dense noise is added on top, and a uniform mask selects
the observed entries.  Every draw is a pure function of the seed, with
one SplitMix64 substream per ingredient.
"""

import math
from dataclasses import dataclass

import numpy as np

from .mask import ObservationMask, sample_mask
from .numerics import l1_norm
from .problem import CpcpProblem
from .rng import SplitMix64, substream

# substream labels
_STREAM_L_FACTORS = 0
_STREAM_S_SUPPORT = 1
_STREAM_S_VALUES = 2
_STREAM_NOISE = 3
_STREAM_MASK = 4


@dataclass(frozen=True)
class SyntheticSpec:
    m: int
    n: int
    r: int
    sparse_fraction: float = 0.01
    sparse_amplitude: float = 100.0
    noise_std: float = 1.0
    rho: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("matrix dimensions must be positive")
        if not 0 <= self.r <= min(self.m, self.n):
            raise ValueError("rank must satisfy 0 <= r <= min(m, n)")
        if not 0.0 <= self.sparse_fraction <= 1.0:
            raise ValueError("sparse_fraction must be in [0, 1]")
        if self.noise_std < 0:
            raise ValueError("noise_std must be nonnegative")
        if not 0.0 < self.rho <= 1.0:
            raise ValueError("rho must be in (0, 1]")


class GroundTruth:
    """Planted decomposition plus the masked observations."""

    def __init__(self, spec, L0, sparse_rows, sparse_cols, sparse_values,
                 mask, observed, tau_L_true, tau_S_true):
        self.spec = spec
        self.L0 = L0
        self.sparse_rows = sparse_rows
        self.sparse_cols = sparse_cols
        self.sparse_values = sparse_values
        self.mask = mask
        self.observed = observed
        self.tau_L_true = tau_L_true
        self.tau_S_true = tau_S_true

    def sparse_dense(self):
        out = np.zeros((self.spec.m, self.spec.n))
        out[self.sparse_rows, self.sparse_cols] = self.sparse_values
        return out

    def problem_constrained(self, tau_L=None, tau_S=None):
        return CpcpProblem.constrained(
            self.mask, self.observed,
            self.tau_L_true if tau_L is None else tau_L,
            self.tau_S_true if tau_S is None else tau_S)

    def problem_penalized(self, lambda_L=None, lambda_S=None, delta=0.01):
        if lambda_L is None or lambda_S is None:
            lambda_L, lambda_S = default_weights(self.mask, self.observed, delta)
        return CpcpProblem.penalized(self.mask, self.observed, lambda_L, lambda_S)


def gen_synthetic(spec):
    """Draw a GroundTruth instance; bit-reproducible from spec.seed."""
    m, n, r = spec.m, spec.n, spec.r

    factors = SplitMix64(substream(spec.seed, _STREAM_L_FACTORS))
    A = factors.gaussians(m * r).reshape(m, r) if r else np.zeros((m, 0))
    B = factors.gaussians(r * n).reshape(r, n) if r else np.zeros((0, n))
    L0 = A @ B

    support = SplitMix64(substream(spec.seed, _STREAM_S_SUPPORT))
    keep = support.uniforms(m * n) < spec.sparse_fraction
    linear = np.nonzero(keep)[0]
    sparse_rows = linear // n
    sparse_cols = linear % n
    values_stream = SplitMix64(substream(spec.seed, _STREAM_S_VALUES))
    sparse_values = spec.sparse_amplitude * values_stream.gaussians(linear.size)

    M = L0.copy()
    M[sparse_rows, sparse_cols] += sparse_values
    if spec.noise_std > 0:
        noise = SplitMix64(substream(spec.seed, _STREAM_NOISE))
        M += spec.noise_std * noise.gaussians(m * n).reshape(m, n)

    mask = sample_mask(m, n, spec.rho, substream(spec.seed, _STREAM_MASK))
    observed = mask.project(M)

    tau_L_true = _nuclear_norm_from_factors(A, B)
    tau_S_true = l1_norm(sparse_values)
    return GroundTruth(spec, L0, sparse_rows, sparse_cols, sparse_values,
                       mask, observed, tau_L_true, tau_S_true)


def _nuclear_norm_from_factors(A, B):
    # sigma(A @ B) == sigma(R_A @ R_B^T) with QR factors, at O(r^3) cost
    if A.shape[1] == 0:
        return 0.0
    _, ra = np.linalg.qr(A)
    _, rb = np.linalg.qr(B.T)
    return float(np.linalg.svd(ra @ rb.T, compute_uv=False).sum())


def default_weights(mask, observed, delta):
    """Data-scaled penalty weights.

    lambda_L = delta * rho * ||P[M]||_F and
    lambda_S = delta * sqrt(rho) * ||P[M]||_F / sqrt(max(m, n)), so
    lambda_L / lambda_S = sqrt(rho * max(m, n)).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    norm = float(np.linalg.norm(observed))
    rho = mask.rho
    lambda_L = delta * rho * norm
    lambda_S = delta * math.sqrt(rho) * norm / math.sqrt(max(mask.shape))
    return lambda_L, lambda_S
