"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is chosen once at import. Set ``EPIMATCH_DISABLE_NUMBA=1`` to force
the numpy path; it is also used when numba cannot be imported.
"""
import os

from . import _numpy

_disabled = os.environ.get("EPIMATCH_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

backend = _numpy
BACKEND = "numpy"
if not _disabled:
    try:
        from . import _numba
    except ImportError:  # pragma: no cover
        pass
    else:
        backend = _numba
        BACKEND = "numba"

delta_point = backend.delta_point
w_point = backend.w_point
delta_grid = backend.delta_grid
w_grid = backend.w_grid
bisect_delta = backend.bisect_delta
bisect_residual = backend.bisect_residual
delta_roots = backend.delta_roots
residual_minima = backend.residual_minima
twopop_response_grid = backend.twopop_response_grid
twopop_iterate = backend.twopop_iterate
twopop_composite_roots = backend.twopop_composite_roots
