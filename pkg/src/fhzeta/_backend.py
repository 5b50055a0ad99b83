"""Kernel backend selection.

The hot numeric kernels exist twice: a numba @njit build and a pure-numpy
build. The env variable FHZETA_BACKEND picks one at import time:

    FHZETA_BACKEND=numba   force numba (ImportError if unavailable)
    FHZETA_BACKEND=numpy   force the pure-numpy fallback
    unset / "auto"         numba when importable, else numpy

`benchmarks/bench_backends.py` times the two side by side.
"""

from __future__ import annotations

import os

_ENV_VAR = "FHZETA_BACKEND"


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def select_backend() -> str:
    requested = os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
    if requested == "auto":
        return "numba" if _numba_available() else "numpy"
    if requested == "numba":
        if not _numba_available():
            raise ImportError(
                f"{_ENV_VAR}=numba requested but numba is not importable"
            )
        return "numba"
    if requested == "numpy":
        return "numpy"
    raise ValueError(f"{_ENV_VAR} must be 'numba', 'numpy' or 'auto', got {requested!r}")


ACTIVE = select_backend()
