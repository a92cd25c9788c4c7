"""Backend dispatch for the hot simulation kernels.

The package ships two interchangeable kernel sets: a numba-compiled one
and a pure-numpy fallback.  Selection happens once, at import time, from
the ``CHAOSWIPT_BACKEND`` environment variable:

    CHAOSWIPT_BACKEND=numba   force the numba kernels (error if unavailable)
    CHAOSWIPT_BACKEND=numpy   force the pure-numpy kernels
    CHAOSWIPT_BACKEND=auto    numba if importable, numpy otherwise (default)

``benchmarks/backend_bench.py`` times the two side by side.
"""

import os

_choice = os.environ.get("CHAOSWIPT_BACKEND", "auto").strip().lower()

if _choice in ("auto", ""):
    try:
        from . import numba_backend as _impl

        BACKEND = "numba"
    except ImportError:
        from . import numpy_backend as _impl

        BACKEND = "numpy"
elif _choice == "numba":
    from . import numba_backend as _impl

    BACKEND = "numba"
elif _choice == "numpy":
    from . import numpy_backend as _impl

    BACKEND = "numpy"
else:
    raise RuntimeError(
        f"CHAOSWIPT_BACKEND={_choice!r} not understood; use 'numba', 'numpy' or 'auto'"
    )

chebyshev_orbit = _impl.chebyshev_orbit
ber_delta_chain = _impl.ber_delta_chain
eh_correlate_chain = _impl.eh_correlate_chain


def available_backends():
    """Names of the kernel backends importable in this environment."""
    names = ["numpy"]
    try:
        import numba  # noqa: F401

        names.insert(0, "numba")
    except ImportError:
        pass
    return names
