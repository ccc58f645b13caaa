"""Window-averaged upscaling of rapidly oscillating elliptic coefficients.

Subpackages and modules:

bytestream
    Deterministic unit-interval sequence replayed from a byte file.
coeff1d / coeff2d
    Coefficient fields and right-hand sides for the 1D and 2D test problems.
oned
    1D pipeline: window averaging, cell correctors, semi-analytic solves.
fem2d
    P1 finite elements on diagonal-split Cartesian grids, periodic cell
    problems and effective-tensor extraction.
upscale
    2D upscaling driver: per-cell windows, tensor field, corrected solutions.
metrics
    Grid transfer and relative error norms for the convergence curves.
harness / cli
    Experiment orchestration and the command-line interface.
"""

from homoglab import _kernels

__version__ = "0.1.0"

KERNEL_BACKEND = _kernels.BACKEND
