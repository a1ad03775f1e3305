"""Kernel backend selection.

The compiled Cython backend is used when the extension was built; otherwise
the NumPy fallback is used. Setting ``QDMAE_PURE_PYTHON=1`` forces the
fallback, which is how the test suite cross-checks the two.
"""

import os

from . import _pykernels

if os.environ.get("QDMAE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND
insert_batch = _impl.insert_batch
lm_transform = _impl.lm_transform


def compiled_available():
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True
