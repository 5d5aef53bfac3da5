"""Kernel backend selection: compiled extension when built, Python twin otherwise.

Set LATTICEORDER_BACKEND=python (or =compiled) to force a backend; forcing
"compiled" raises ImportError when the extension is missing instead of
silently falling back.
"""

import os

_forced = os.environ.get("LATTICEORDER_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _pycore as kernels

    BACKEND = "python"
elif _forced == "compiled":
    from . import _core as kernels  # noqa: F401  (ImportError is the contract)

    BACKEND = "compiled"
elif _forced:
    raise ValueError(f"LATTICEORDER_BACKEND must be 'python' or 'compiled', got {_forced!r}")
else:
    try:
        from . import _core as kernels

        BACKEND = "compiled"
    except ImportError:
        from . import _pycore as kernels

        BACKEND = "python"


def backend_name() -> str:
    """Which kernel implementation this process is running on."""
    return BACKEND
