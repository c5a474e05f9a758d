"""Uniform scalar quantization of subband coefficients.

The range is taken from the data (per subband), split into ``levels`` equal
cells, and reconstructed at cell midpoints.  A degenerate (constant) subband
gets step 1, so its values reconstruct to ``min + 0.5``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CorruptStreamError, ParameterError

MAX_LEVELS = 256  # indices must fit one byte for the entropy stage


@dataclass(frozen=True)
class QuantizerSpec:
    """Uniform quantizer description: lower bound, cell width, cell count."""

    min: float
    step: float
    levels: int

    def __post_init__(self):
        if not self.step > 0:
            raise ParameterError("quantizer step must be positive")
        if not 1 <= self.levels <= MAX_LEVELS:
            raise ParameterError(f"quantizer levels {self.levels} outside 1..{MAX_LEVELS}")


def quantize_subband(matrix, levels: int) -> tuple[np.ndarray, QuantizerSpec]:
    """Quantize a coefficient matrix to ``levels`` uniform cells.

    Returns the uint8 index matrix and the :class:`QuantizerSpec` needed to
    dequantize it.  ``levels`` must be in ``[2, 256]``.
    """
    if not 2 <= levels <= MAX_LEVELS:
        raise ParameterError(f"quantization levels {levels} outside 2..{MAX_LEVELS}")
    m = np.asarray(matrix, dtype=np.float64)
    if m.size == 0:
        raise ParameterError("cannot quantize an empty matrix")
    lo = float(m.min())
    hi = float(m.max())
    step = (hi - lo) / levels if hi > lo else 1.0
    indices = np.clip(np.floor((m - lo) / step), 0, levels - 1).astype(np.uint8)
    return indices, QuantizerSpec(min=lo, step=step, levels=levels)


def dequantize(indices, spec: QuantizerSpec) -> np.ndarray:
    """Midpoint reconstruction ``min + (index + 0.5) * step``."""
    idx = np.asarray(indices)
    if idx.size and int(idx.max()) >= spec.levels:
        raise CorruptStreamError(
            f"quantization index {int(idx.max())} >= declared level count {spec.levels}"
        )
    return spec.min + (idx.astype(np.float64) + 0.5) * spec.step
