"""Numerical backend selection.

The hot kernel evaluations (Dawson function and the closed-form smeared
kernels) exist twice: a Cython extension ``_kern_cy`` and a pure-numpy
fallback ``_kern_np`` with identical call surfaces.  The compiled core is
preferred when the extension built; set ``COSMOHARVEST_PURE=1`` to force
the fallback (used by the benchmark and the test suite).
"""

import os


def _load():
    if os.environ.get("COSMOHARVEST_PURE") == "1":
        from . import _kern_np

        return _kern_np
    try:
        from . import _kern_cy  # type: ignore[attr-defined]

        return _kern_cy
    except ImportError:
        from . import _kern_np

        return _kern_np


# module-level so callers can look it up dynamically (and tests can patch it)
impl = _load()


def backend_name() -> str:
    """Either "compiled" or "pure"."""
    return "compiled" if impl.COMPILED else "pure"
