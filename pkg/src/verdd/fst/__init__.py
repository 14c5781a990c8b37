"""Finite-state transducer engine: tabular-format parsing and lookup.

The lookup inner loop exists twice: a Cython extension (``_kernel``) and a
pure-Python mirror (``_pykernel``). The extension is used when it was
built; set ``VERDD_PURE_FST=1`` to force the pure kernel (the benchmark
under ``benchmarks/`` compares the two).
"""

from __future__ import annotations

import os

if os.environ.get("VERDD_PURE_FST"):
    from . import _pykernel as kernel

    KERNEL = "pure"
else:
    try:
        from . import _kernel as kernel  # type: ignore[no-redef]

        KERNEL = "compiled"
    except ImportError:
        from . import _pykernel as kernel  # type: ignore[no-redef]

        KERNEL = "pure"

from .flags import EMPTY_REGISTER, Flag, FlagRegister, is_flag_shaped, parse_flag, step_flag
from .transducer import (
    DEFAULT_EPSILON_LIMIT,
    EPSILON_SYMBOLS,
    Arc,
    LookupResult,
    Transducer,
    lookup,
    lookup_all,
    parse_att,
    tokenize,
)

__all__ = [
    "Arc",
    "DEFAULT_EPSILON_LIMIT",
    "EMPTY_REGISTER",
    "EPSILON_SYMBOLS",
    "Flag",
    "FlagRegister",
    "KERNEL",
    "LookupResult",
    "Transducer",
    "is_flag_shaped",
    "kernel",
    "lookup",
    "lookup_all",
    "parse_att",
    "parse_flag",
    "step_flag",
    "tokenize",
]
