"""Numpy reference implementation of the lookup kernels.

All three take the knot vector t_0 < ... < t_S of a piecewise description
and evaluate at arbitrary points, clamping to the outermost segments.
Segment i covers [t_i, t_{i+1}) (half-open on the right).
"""

import numpy as np


def _segment_index(knots, x):
    idx = np.searchsorted(knots, x, side="right") - 1
    return np.clip(idx, 0, len(knots) - 2)


def pwconst_eval(knots, segvals, x):
    """Piecewise-constant lookup: segvals[i] on [t_i, t_{i+1})."""
    x = np.asarray(x, dtype=np.float64)
    return segvals[_segment_index(knots, x)]


def pwlin_eval(knots, vals, slopes, x):
    """Piecewise-linear eval: vals[i] + slopes[i]*(x - t_i) on segment i."""
    x = np.asarray(x, dtype=np.float64)
    i = _segment_index(knots, x)
    return vals[i] + slopes[i] * (x - knots[i])


def pwquad_eval(knots, vals, derivs, curvs, x):
    """Piecewise-quadratic eval: vals[i] + derivs[i]*d + curvs[i]*d*d."""
    x = np.asarray(x, dtype=np.float64)
    i = _segment_index(knots, x)
    d = x - knots[i]
    return vals[i] + d * (derivs[i] + d * curvs[i])
