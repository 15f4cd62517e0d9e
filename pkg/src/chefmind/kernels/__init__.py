"""Hot-loop kernels: compiled core with a pure-Python fallback.

The backend is chosen once at import time: the Cython extension when it was
built, otherwise the Python twin. Set CHEFMIND_KERNELS=python or =native to
force one (native raises if the extension is missing). Both backends are
bit-identical by contract; see benchmarks/bench_kernels.py for the speed
comparison.
"""

from __future__ import annotations

import os

from chefmind.kernels import _pyimpl

_choice = os.environ.get("CHEFMIND_KERNELS", "auto")
if _choice not in ("auto", "native", "python"):
    raise ValueError(f"CHEFMIND_KERNELS must be auto, native, or python, not {_choice!r}")

if _choice == "python":
    _impl = _pyimpl
    BACKEND = "python"
else:
    try:
        from chefmind.kernels import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        if _choice == "native":
            raise
        _impl = _pyimpl
        BACKEND = "python"

fnv1a64 = _impl.fnv1a64
ngram_bucket_counts = _impl.ngram_bucket_counts

__all__ = ["BACKEND", "fnv1a64", "ngram_bucket_counts"]
