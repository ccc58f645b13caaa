"""1D coefficient fields and right-hand sides for the model problem.

The coefficient equals 1 on (-1, 1/4) and [x_M, 2) and is piecewise constant
on randomly generated intervals inside [1/4, x_M), where x_M is the first
breakpoint >= 3/4.  Interval widths and values are drawn alternately from a
byte stream: width first, then the value on the new interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from homoglab import _kernels
from homoglab.bytestream import ByteStreamRng
from homoglab.errors import OutOfDomain

DOMAIN_LO = -1.0
DOMAIN_HI = 2.0

# Oscillation scale per case tag.
CASE_EPS = {"a1": 0.004, "a2": 0.001, "a3": 0.00025}


@dataclass(frozen=True)
class PiecewiseConstantCoeff1D:
    """Piecewise-constant coefficient on (-1, 2), immutable after build.

    ``breakpoints`` are x_1 < ... < x_M with x_1 = 1/4 and x_M >= 3/4;
    ``values[i]`` holds on [x_i, x_{i+1}); the value is exactly 1 outside
    (1/4, x_M).
    """

    breakpoints: np.ndarray
    values: np.ndarray
    # Full knot structure including the outer unit segments, for fast lookup
    # and exact prefix integrals of 1/a.
    knots: np.ndarray = field(init=False, repr=False)
    seg_values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        if bp.ndim != 1 or vals.shape != (bp.size - 1,):
            raise ValueError("need M breakpoints and M-1 interval values")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(vals <= 0):
            raise ValueError("coefficient values must be positive")
        knots = np.concatenate(([DOMAIN_LO], bp, [DOMAIN_HI]))
        seg = np.concatenate(([1.0], vals, [1.0]))
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "seg_values", seg)

    def __call__(self, x):
        """Pointwise lookup with the half-open convention [x_i, x_{i+1})."""
        xa = np.asarray(x, dtype=np.float64)
        if np.any(xa <= DOMAIN_LO) or np.any(xa >= DOMAIN_HI):
            raise OutOfDomain("coefficient evaluated outside (-1, 2)")
        return _kernels.pwconst_eval(self.knots, self.seg_values, xa)

    def prefix_integrals(self) -> "InverseCoeffPrefix":
        return InverseCoeffPrefix.from_coeff(self)


@dataclass(frozen=True)
class InverseCoeffPrefix:
    """Exact prefix integrals of 1/a over (-1, 2).

    g(t) = integral of 1/a from -1 to t (piecewise linear in t) and
    gg(t) = integral of g from -1 to t (piecewise quadratic).  Both are
    closed-form against the piecewise-constant coefficient, so window
    averages and cell correctors carry no quadrature error.
    """

    knots: np.ndarray
    g_at_knots: np.ndarray
    inv_vals: np.ndarray
    gg_at_knots: np.ndarray
    half_curv: np.ndarray

    @classmethod
    def from_coeff(cls, coeff: PiecewiseConstantCoeff1D) -> "InverseCoeffPrefix":
        knots = coeff.knots
        inv_vals = 1.0 / coeff.seg_values
        widths = np.diff(knots)
        g = np.concatenate(([0.0], np.cumsum(widths * inv_vals)))
        seg_gg = widths * g[:-1] + 0.5 * widths**2 * inv_vals
        gg = np.concatenate(([0.0], np.cumsum(seg_gg)))
        return cls(knots, g, inv_vals, gg, 0.5 * inv_vals)

    def g(self, x):
        return _kernels.pwlin_eval(self.knots, self.g_at_knots[:-1], self.inv_vals, x)

    def gg(self, x):
        return _kernels.pwquad_eval(
            self.knots, self.gg_at_knots[:-1], self.g_at_knots[:-1], self.half_curv, x
        )


def build_coeff_1d(case: str, rng: ByteStreamRng) -> PiecewiseConstantCoeff1D:
    """Generate the oscillatory band for case a1/a2/a3 from a byte stream.

    Draw order per interval: width first (x_{i+1} = x_i + eps*(0.1+4*xi)/2.1),
    then the value 0.001 + xi on the new interval.  Generation stops at the
    first breakpoint >= 3/4.
    """
    eps = CASE_EPS[case]
    breakpoints = [0.25]
    values = []
    while breakpoints[-1] < 0.75:
        width = eps * (0.1 + 4.0 * rng.next_xi()) / 2.1
        breakpoints.append(breakpoints[-1] + width)
        values.append(0.001 + rng.next_xi())
    return PiecewiseConstantCoeff1D(np.array(breakpoints), np.array(values))


def max_draws_1d(case: str) -> int:
    """Upper bound on byte-stream draws needed by build_coeff_1d."""
    eps = CASE_EPS[case]
    min_width = eps * 0.1 / 2.1
    return 2 * math.ceil(0.5 / min_width)


@dataclass(frozen=True)
class Rhs1D:
    """Right-hand side case f1/f2/f3 with its exact antiderivative."""

    case: str

    def __post_init__(self):
        if self.case not in ("f1", "f2", "f3"):
            raise ValueError(f"unknown rhs case {self.case!r}")

    def f(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.case == "f1":
            return 50.0 * np.sin(30.0 * x)
        if self.case == "f2":
            return np.full_like(x, -4.0)
        return 4.0 * (
            ((x > 0.5) & (x < 0.75)).astype(np.float64)
            - ((x > 0.25) & (x < 0.5)).astype(np.float64)
        )

    def F(self, x):
        """Antiderivative with F(0) = 0, continuous."""
        x = np.asarray(x, dtype=np.float64)
        if self.case == "f1":
            return (50.0 / 30.0) * (1.0 - np.cos(30.0 * x))
        if self.case == "f2":
            return -4.0 * x
        down = np.clip(x, 0.25, 0.5) - 0.25
        up = np.clip(x, 0.5, 0.75) - 0.5
        return 4.0 * (up - down)
