"""Hot-loop kernels: compiled core when available, NumPy fallback otherwise.

Set CONERANK_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the backend-parity tests).
"""

import os

if os.environ.get("CONERANK_PURE_PYTHON") == "1":
    from ._hals_py import BACKEND, hals_fit
else:
    try:
        from ._hals_cy import BACKEND, hals_fit  # type: ignore[attr-defined]
    except ImportError:
        from ._hals_py import BACKEND, hals_fit

__all__ = ["BACKEND", "hals_fit"]
