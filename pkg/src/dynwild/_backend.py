"""Kernel backend selection.

The hot inner loops (segment-tree hashing, block-table maintenance,
window scans) are compiled with numba when it is available.  Setting the
environment variable ``DYNWILD_BACKEND`` overrides the choice:

* ``DYNWILD_BACKEND=numba``  -- require numba, fail loudly if missing.
* ``DYNWILD_BACKEND=python`` -- run the same kernels as plain Python.
* unset / ``auto``           -- use numba if importable, else Python.

The flag is read once at import time; ``dynwild bench --compare-backends``
runs each backend in a subprocess to measure both in one invocation.
"""

from __future__ import annotations

import os

_ENV_VAR = "DYNWILD_BACKEND"


def _resolve() -> bool:
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice in ("python", "numpy"):
        return False
    if choice == "numba":
        import numba  # noqa: F401  -- fail here if unavailable

        return True
    if choice in ("auto", ""):
        try:
            import numba  # noqa: F401
        except ImportError:
            return False
        return True
    raise ValueError(
        f"{_ENV_VAR} must be 'numba', 'python' or 'auto', got {choice!r}"
    )


NUMBA_ENABLED: bool = _resolve()


def backend_name() -> str:
    """Name of the active kernel backend ('numba' or 'python')."""
    return "numba" if NUMBA_ENABLED else "python"


def jit(fn):
    """Compile ``fn`` with numba on the numba backend, else return it as is."""
    if NUMBA_ENABLED:
        import numba

        return numba.njit(cache=True)(fn)
    return fn
