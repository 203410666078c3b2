"""Series-sum kernels with a compiled fast path.

The double sum over odd (m, n) indices is the hot spot of the analytical
damping model: it runs once per frequency point, per coefficient, inside
spectrum synthesis and optimizer sweeps. A Cython extension provides the
fast path; a vectorized numpy implementation is the fallback. Selection
happens once at import. Set SFDNOISE_PURE=1 to force the fallback.
"""

import os

from ._series_py import series_sums as _series_sums_py

series_sums_py = _series_sums_py

if os.environ.get("SFDNOISE_PURE"):
    series_sums = _series_sums_py
    BACKEND = "python"
else:
    try:
        from ._series_cy import series_sums as _series_sums_cy

        series_sums = _series_sums_cy
        BACKEND = "cython"
    except ImportError:
        series_sums = _series_sums_py
        BACKEND = "python"

__all__ = ["series_sums", "series_sums_py", "BACKEND"]
