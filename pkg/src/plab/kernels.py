"""Backend selection for the graph search kernels.

The compiled module is used when it imports; otherwise the pure-Python twin
takes over.  Setting ``PLAB_PURE_PYTHON=1`` forces the fallback.
"""

import os

from plab import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from plab import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and os.environ.get("PLAB_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]

max_clique = _impl.max_clique
max_clique_exhaustive = _impl.max_clique_exhaustive
scan_clique_extensions = _impl.scan_clique_extensions
injective_homomorphisms = _impl.injective_homomorphisms
count_injective_homomorphisms = _impl.count_injective_homomorphisms


def get_backend(name=None):
    """Return the kernel module for ``name`` (default: the active one)."""
    if name is None:
        return _impl
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None
