"""Kernel backend selection.

The compiled ``_ckernels`` extension is preferred; if it cannot be imported
the pure-Python ``_pykernels`` module is used instead. ``use()`` switches
explicitly, which the benchmark and the parity tests rely on.
"""

from rarebridge import _pykernels

try:
    from rarebridge import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

name = "cython" if _ckernels is not None else "python"
kernels = BACKENDS[name]


def available():
    return list(BACKENDS)


def use(backend):
    """Select ``"cython"`` or ``"python"`` kernels for the whole process."""
    global name, kernels
    if backend not in BACKENDS:
        raise ValueError(f"backend {backend!r} unavailable; have {available()}")
    name = backend
    kernels = BACKENDS[backend]
    return kernels
