"""2D analytic coefficient fields, defined on all of R^2.

Two kinds are provided: a fixed multi-frequency formula without scale
separation ("mingyue"), and random superpositions of rotated sine waves
mapped through 10^(beta*S) to hit a prescribed contrast ("random-sines").
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from homoglab.bytestream import ByteStreamRng

MINGYUE_SCALES = (1.0 / 5, 1.0 / 13, 1.0 / 17, 1.0 / 31, 1.0 / 65)

# Reference (min, max) of S over the unit square per wave count; beta is
# always derived from this table so the exponent scale stays documented and
# independent of the byte file actually used.
S_EXTREMA_TABLE = {
    64: (-19.7229, 22.5351),
    128: (-36.1412, 34.124),
    256: (-49.6262, 51.5507),
    512: (-81.8554, 75.7885),
}

DEFAULT_CONTRAST = 1.0e4


@dataclass(frozen=True)
class ConstantCoeff2D:
    """Spatially constant coefficient, for smoke configurations."""

    value: float = 1.0

    def __call__(self, x1, x2):
        return np.full(np.broadcast(np.asarray(x1), np.asarray(x2)).shape, self.value)

    @property
    def oscillation_count(self) -> int:
        return 1


@dataclass(frozen=True)
class MingyueCoeff:
    """Six-term oscillatory formula with nested frequencies 1/5 ... 1/65."""

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=np.float64)
        x2 = np.asarray(x2, dtype=np.float64)
        e1, e2, e3, e4, e5 = MINGYUE_SCALES
        two_pi = 2.0 * np.pi
        total = (
            (1.1 + np.sin(two_pi * x1 / e1)) / (1.1 + np.sin(two_pi * x2 / e1))
            + (1.1 + np.sin(two_pi * x2 / e2)) / (1.1 + np.cos(two_pi * x1 / e2))
            + (1.1 + np.cos(two_pi * x1 / e3)) / (1.1 + np.sin(two_pi * x2 / e3))
            + (1.1 + np.sin(two_pi * x2 / e4)) / (1.1 + np.cos(two_pi * x1 / e4))
            + (1.1 + np.cos(two_pi * x1 / e5)) / (1.1 + np.sin(two_pi * x2 / e5))
            + np.sin(4.0 * x1**2 * x2**2)
            + 1.0
        )
        return total / 6.0

    @property
    def oscillation_count(self) -> int:
        # Finest period is 1/65; twice that many cells per side resolve it.
        return 130


@dataclass(frozen=True)
class RandomSinesCoeff:
    """a(x) = 10^(beta*S(x)) with S a sum of n_sin rotated sine waves.

    Wave angles and phases come from a byte stream (angle first, phase
    second, per wave).  beta targets max/min contrast C via the tabulated
    extrema of S.
    """

    n_sin: int
    angles: np.ndarray
    phases: np.ndarray
    contrast: float = DEFAULT_CONTRAST
    beta: float = field(init=False)

    def __post_init__(self):
        if self.n_sin not in S_EXTREMA_TABLE:
            raise ValueError(f"n_sin must be one of {sorted(S_EXTREMA_TABLE)}")
        if self.angles.shape != (self.n_sin,) or self.phases.shape != (self.n_sin,):
            raise ValueError("angles/phases must have length n_sin")
        s_min, s_max = S_EXTREMA_TABLE[self.n_sin]
        object.__setattr__(self, "beta", np.log10(self.contrast) / (s_max - s_min))

    @classmethod
    def from_stream(
        cls, n_sin: int, rng: ByteStreamRng, contrast: float = DEFAULT_CONTRAST
    ) -> "RandomSinesCoeff":
        xi = rng.take(2 * n_sin)
        return cls(n_sin, 2.0 * np.pi * xi[0::2], 2.0 * xi[1::2], contrast)

    def wave_sum(self, x1, x2):
        """S(x) accumulated wave by wave to bound temporary storage."""
        x1 = np.asarray(x1, dtype=np.float64)
        x2 = np.asarray(x2, dtype=np.float64)
        s = np.zeros(np.broadcast(x1, x2).shape)
        for i in range(self.n_sin):
            freq = np.pi * (i + 1)
            s += np.sin(
                freq
                * (
                    x1 * np.sin(self.angles[i])
                    + x2 * np.cos(self.angles[i])
                    + self.phases[i]
                )
            )
        return s

    def wave_sum_gradient(self, x1, x2):
        """Analytic (dS/dx1, dS/dx2)."""
        x1 = np.asarray(x1, dtype=np.float64)
        x2 = np.asarray(x2, dtype=np.float64)
        g1 = np.zeros(np.broadcast(x1, x2).shape)
        g2 = np.zeros_like(g1)
        for i in range(self.n_sin):
            freq = np.pi * (i + 1)
            sin_a, cos_a = np.sin(self.angles[i]), np.cos(self.angles[i])
            c = freq * np.cos(freq * (x1 * sin_a + x2 * cos_a + self.phases[i]))
            g1 += c * sin_a
            g2 += c * cos_a
        return g1, g2

    def __call__(self, x1, x2):
        return 10.0 ** (self.beta * self.wave_sum(x1, x2))

    @property
    def oscillation_count(self) -> int:
        return self.n_sin


def estimate_extrema_S(coeff: RandomSinesCoeff, n_sample: int) -> tuple[float, float]:
    """Min/max of S over an n x n uniform node grid on the unit square.

    Validation aid only; the tabulated extrema stay authoritative for beta.
    """
    t = np.linspace(0.0, 1.0, n_sample)
    lo = np.inf
    hi = -np.inf
    # Row blocks keep peak memory at O(block * n_sample).
    block = max(1, (1 << 22) // n_sample)
    for start in range(0, n_sample, block):
        rows = t[start : start + block]
        s = coeff.wave_sum(rows[:, None], t[None, :])
        lo = min(lo, float(s.min()))
        hi = max(hi, float(s.max()))
    return lo, hi
