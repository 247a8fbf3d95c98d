"""Intensity normalization and square padding for raw images."""

from __future__ import annotations

import numpy as np


def normalize_image(raw) -> np.ndarray:
    """Min-max scale to [0, 1] and zero-pad the short axis to a square.

    The padding is split evenly, with the extra pixel on the trailing side
    when the deficit is odd. A constant image maps to all 0.5 (min-max is
    undefined there).
    """
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")

    lo, hi = float(arr.min()), float(arr.max())
    if hi > lo:
        arr = (arr - lo) / (hi - lo)
    else:
        arr = np.full_like(arr, 0.5)

    h, w = arr.shape
    side = max(h, w)
    pad_h, pad_w = side - h, side - w
    return np.pad(arr, ((pad_h // 2, pad_h - pad_h // 2),
                        (pad_w // 2, pad_w - pad_w // 2)))
