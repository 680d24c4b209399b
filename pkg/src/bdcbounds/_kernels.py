"""Backend selection for the hot loops.

The Cython extension is used when it imports; otherwise, or when
``BDCBOUNDS_PURE_PYTHON`` is set to a non-empty value, the numpy fallback is used.
Both backends return identical integers for identical inputs.
"""

import os

from bdcbounds import _pykernels

if os.environ.get("BDCBOUNDS_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from bdcbounds import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

subsequence_table = _impl.subsequence_table
markov_deletion_pairs = _impl.markov_deletion_pairs


def available_backends():
    """Map of backend name to kernel module for every backend that imports."""
    found = {"python": _pykernels}
    try:
        from bdcbounds import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
