"""Backend selection for the compiled kernels.

Set ``NWITNESS_DISABLE_NUMBA=1`` to force the pure-numpy paths (useful for
debugging and for benchmarking the two against each other).  If numba is
not importable the numpy paths are used regardless.
"""

import os

DISABLE_ENV = "NWITNESS_DISABLE_NUMBA"

_disabled = os.environ.get(DISABLE_ENV, "").strip().lower() in {"1", "true", "yes", "on"}

njit = None
if not _disabled:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        njit = None

HAVE_NUMBA = njit is not None
BACKEND = "numba" if HAVE_NUMBA else "numpy"
