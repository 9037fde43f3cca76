"""Synthesis backend selection.

The compiled extension is preferred when importable; TLSBATH_BACKEND=python
forces the numpy fallback and TLSBATH_BACKEND=compiled makes a missing
extension an error instead of a silent fallback. Both backends produce
bit-identical traces.
"""

from __future__ import annotations

import os

from .errors import UsageError


def _select():
    choice = os.environ.get("TLSBATH_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "", "compiled", "python"):
        raise UsageError(
            f"TLSBATH_BACKEND={choice!r}; expected auto, compiled, or python"
        )
    if choice == "python":
        from . import _kernels_py as mod
        return mod, "python"
    try:
        from . import _kernels as mod
        return mod, "compiled"
    except ImportError:
        if choice == "compiled":
            raise UsageError(
                "TLSBATH_BACKEND=compiled but the extension is not built"
            ) from None
        from . import _kernels_py as mod
        return mod, "python"


kernels, BACKEND = _select()


def backend_name() -> str:
    """Either "compiled" or "python"."""
    return BACKEND
