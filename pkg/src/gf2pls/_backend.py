"""Kernel backend selection.

The compiled Cython module is used when it imports, otherwise the numpy
fallback.  ``GF2PLS_BACKEND`` (``auto``, ``compiled`` or ``python``) picks
one explicitly at import; :func:`use` switches at runtime.  Callers look up
``impl`` at call time so a switch takes effect immediately.
"""

import os

from . import _pycore

try:
    from . import _core as _compiled
except ImportError:  # extension not built
    _compiled = None

impl = _pycore


def available():
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return names


def use(name="auto"):
    """Select ``auto``, ``compiled`` or ``python`` and return the chosen name."""
    global impl
    if name == "auto":
        impl = _compiled if _compiled is not None else _pycore
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled backend is not available; rebuild the extension")
        impl = _compiled
    elif name == "python":
        impl = _pycore
    else:
        raise ValueError(f"unknown backend {name!r}")
    return impl.BACKEND


def get():
    return impl.BACKEND


use(os.environ.get("GF2PLS_BACKEND", "auto"))
