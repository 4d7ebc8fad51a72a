"""Deterministic 64-bit counter-based random streams.

Everything random in this package (synthetic instances, mask sampling,
power-iteration starts) is driven by SplitMix64 so that a seed
reproduces the exact same bits on any platform, independent of numpy's
generator choices.  Gaussians come from the polar Box-Muller method on
top of the uniform stream.
"""

import numpy as np

_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
# 2^-53, to map the top 53 bits of a u64 to [0, 1)
_U53 = 1.0 / 9007199254740992.0


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1 & _MASK64
    z = (z ^ (z >> np.uint64(27))) * _MIX2 & _MASK64
    return z ^ (z >> np.uint64(31))


def substream(seed, index):
    """Derive the seed of an independent child stream."""
    base = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        return int(_mix((base + np.uint64(index + 1) * _GAMMA) & _MASK64))


class SplitMix64:
    """Counter-based SplitMix64 stream over numpy arrays.

    Outputs are a pure function of (seed, counter); drawing n values
    advances the counter by n, so consumption order defines the stream.
    """

    def __init__(self, seed):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def next_u64(self, n):
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        with np.errstate(over="ignore"):
            return _mix((self._seed + idx * _GAMMA) & _MASK64)

    def uniforms(self, n):
        """n doubles uniform on [0, 1)."""
        return (self.next_u64(n) >> np.uint64(11)).astype(np.float64) * _U53

    def gaussians(self, n):
        """n standard normals via the polar (Marsaglia) Box-Muller method.

        Candidate pairs are consumed from the uniform stream in order;
        the delivered values are the first n accepted, so the output is
        a pure function of the seed and the sequence of calls.
        """
        out = np.empty(n, dtype=np.float64)
        filled = 0
        while filled < n:
            want = max(n - filled, 32)
            # ~21.5% rejection rate for the unit disk; oversample a bit
            m = int(want * 0.7) + 16
            x = 2.0 * self.uniforms(m) - 1.0
            y = 2.0 * self.uniforms(m) - 1.0
            s = x * x + y * y
            keep = (s < 1.0) & (s > 0.0)
            x, y, s = x[keep], y[keep], s[keep]
            f = np.sqrt(-2.0 * np.log(s) / s)
            pair = np.empty(2 * x.size, dtype=np.float64)
            pair[0::2] = x * f
            pair[1::2] = y * f
            take = min(pair.size, n - filled)
            out[filled:filled + take] = pair[:take]
            filled += take
        return out
