"""Backend selection for the integration kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or
when ``CURVPEND_PURE_PYTHON`` is set to a non-empty value other than ``0``,
the pure-Python ``_pykernels`` module is used.  Both expose the same
functions and produce the same rigid-system bits.
"""

import logging
import os

from . import _pykernels

log = logging.getLogger(__name__)

python = _pykernels
compiled = None
try:
    from . import _ckernels as compiled
except ImportError as exc:  # pragma: no cover - depends on the build
    log.debug("compiled kernels unavailable: %s", exc)

_force_python = os.environ.get("CURVPEND_PURE_PYTHON", "") not in ("", "0")
default = python if (_force_python or compiled is None) else compiled
BACKEND = default.BACKEND


def available():
    """All importable kernel modules, fastest first."""
    return [m for m in (compiled, python) if m is not None]


def get(name=None):
    """Kernel module by name ('cython' or 'python'); None gives the default."""
    if name is None:
        return default
    for mod in available():
        if mod.BACKEND == name:
            return mod
    raise ValueError(f"kernel backend {name!r} is not available")
