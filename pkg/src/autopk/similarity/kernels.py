"""Kernel selection: compiled extension when available, pure Python otherwise.

``KERNEL_BACKEND`` reports which implementation is active; the benchmark
under ``benchmarks/`` compares the two directly.
"""

from __future__ import annotations

try:
    from autopk.similarity._ckernels import levenshtein_distance

    KERNEL_BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from autopk.similarity._pykernels import levenshtein_distance

    KERNEL_BACKEND = "pure-python"

__all__ = ["levenshtein_distance", "KERNEL_BACKEND"]
