"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python reference when
the extension is missing or when SELMERGRAPH_PURE=1 is set.  The compiled
disc search signals -2 when it would need more precision than its fixed-width
modulus offers, in which case the call is redone exactly.
"""

import os

from . import _pure

if os.environ.get("SELMERGRAPH_PURE") == "1":
    _impl = _pure
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND_NAME = _impl.BACKEND_NAME

jacobi = _impl.jacobi


def quartic_padic_solvable(d, c0, c2, c4, l, kmax):
    res = _impl.quartic_padic_solvable(d, c0, c2, c4, l, kmax)
    if res == -2:
        res = _pure.quartic_padic_solvable(d, c0, c2, c4, l, kmax)
    return res
