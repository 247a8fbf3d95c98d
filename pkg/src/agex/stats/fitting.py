"""Least-squares logarithmic fit MAE = a + b * ln(N)."""

from __future__ import annotations

import numpy as np


def log_fit(ns, maes) -> tuple[float, float, float]:
    """Fit `mae = a + b*ln(n)`; returns (a, b, fit rmse)."""
    n = np.asarray(ns, dtype=np.float64)
    m = np.asarray(maes, dtype=np.float64)
    if n.shape != m.shape or n.ndim != 1 or n.size < 2:
        raise ValueError("need >= 2 (n, mae) points of equal length")
    if np.any(n < 1):
        raise ValueError("all ns must be >= 1")
    if np.unique(n).size < 2:
        raise ValueError("singular fit: all ns are equal")
    design = np.column_stack([np.ones_like(n), np.log(n)])
    coef, *_ = np.linalg.lstsq(design, m, rcond=None)
    resid = m - design @ coef
    return float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid ** 2)))
