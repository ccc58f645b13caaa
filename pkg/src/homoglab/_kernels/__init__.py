"""Hot evaluation kernels with a compiled core and a pure-numpy fallback.

The 1D pipeline evaluates piecewise-constant coefficients and their exact
first/second prefix integrals at millions of points per sweep.  Those three
lookups are implemented twice:

- ``_fast``: Cython extension (built by setup.py),
- ``_pure``: vectorized numpy, always available.

The backend is chosen once at import.  Set ``HOMOGLAB_PURE=1`` to force the
fallback (used by the benchmark and the equivalence tests).
"""

import os

from homoglab._kernels import _pure

if os.environ.get("HOMOGLAB_PURE") == "1":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from homoglab._kernels import _fast as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

pwconst_eval = _impl.pwconst_eval
pwlin_eval = _impl.pwlin_eval
pwquad_eval = _impl.pwquad_eval

__all__ = ["BACKEND", "pwconst_eval", "pwlin_eval", "pwquad_eval"]
