"""Relaxation kernels with a compiled core and a pure-numpy fallback.

The Cython extension is preferred when it was built; setting the environment
variable ``QDISK_PURE=1`` forces the fallback (used by the benchmark and by
tests that exercise both code paths).
"""

import os

from . import fallback

if os.environ.get("QDISK_PURE"):
    _impl = fallback
else:
    try:
        from . import _native as _impl
    except ImportError:
        _impl = fallback

BACKEND = _impl.BACKEND
gs_sweep = _impl.gs_sweep
gs_center = _impl.gs_center
gs_energy = _impl.gs_energy


def backends():
    """All importable kernel implementations, for benchmarks and tests."""
    impls = {"fallback": fallback}
    try:
        from . import _native
    except ImportError:
        pass
    else:
        impls["native"] = _native
    return impls
