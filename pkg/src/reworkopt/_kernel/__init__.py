"""Kernel backend selection.

The compiled extension is preferred when it imports; the pure-Python
twin is the fallback and the reference.  Set REWORKOPT_PURE=1 to force
the fallback (used by the parity tests and the benchmark).
"""

import os

from . import pure

BACKEND = "pure"
_impl = pure

if not os.environ.get("REWORKOPT_PURE"):
    try:
        from . import _core  # type: ignore[attr-defined]

        _impl = _core
        BACKEND = "compiled"
    except ImportError:
        pass

mix64 = _impl.mix64
u01 = _impl.u01
normal = _impl.normal
clamped_normal = _impl.clamped_normal
gamma = _impl.gamma
truncated_normal = _impl.truncated_normal
job_step = _impl.job_step


def backends():
    """Return {name: module} for every importable backend."""
    out = {"pure": pure}
    try:
        from . import _core  # type: ignore[attr-defined]

        out["compiled"] = _core
    except ImportError:
        pass
    return out
