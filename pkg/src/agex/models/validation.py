"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np


def check_image_batch(X, resolution: int | None = None) -> np.ndarray:
    """Coerce to a float32 (N, R, R) stack of square images."""
    X = np.asarray(X, dtype=np.float32)
    if X.ndim == 2:
        X = X[None]
    if X.ndim == 4 and X.shape[1] == 1:
        X = X[:, 0]
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise ValueError(f"expected square images of shape (N, R, R), got {X.shape}")
    if resolution is not None and X.shape[1] != resolution:
        raise ValueError(f"images are {X.shape[1]}x{X.shape[2]} but the model "
                         f"expects {resolution}x{resolution}")
    if not np.all(np.isfinite(X)):
        raise ValueError("images contain non-finite values")
    return X


def check_pair_batch(X, resolution: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Coerce to float32 pair stacks: (N, 2, R, R) -> two (N, R, R) arrays."""
    X = np.asarray(X, dtype=np.float32)
    if X.ndim == 3 and X.shape[0] == 2:
        X = X[None]
    if X.ndim != 4 or X.shape[1] != 2 or X.shape[2] != X.shape[3]:
        raise ValueError(f"expected image pairs of shape (N, 2, R, R), got {X.shape}")
    if resolution is not None and X.shape[2] != resolution:
        raise ValueError(f"pair images are {X.shape[2]}x{X.shape[3]} but the model "
                         f"expects {resolution}x{resolution}")
    if not np.all(np.isfinite(X)):
        raise ValueError("images contain non-finite values")
    return X[:, 0], X[:, 1]


def check_ages(y, n: int) -> np.ndarray:
    y = np.asarray(y, dtype=np.float32).reshape(-1)
    if y.shape[0] != n:
        raise ValueError(f"got {y.shape[0]} ages for {n} images")
    if not np.all(np.isfinite(y)) or np.any(y < 0) or np.any(y > 105):
        raise ValueError("ages must be finite and lie in [0, 105]")
    return y


def check_binary_labels(y, n: int) -> np.ndarray:
    y = np.asarray(y, dtype=np.float32).reshape(-1)
    if y.shape[0] != n:
        raise ValueError(f"got {y.shape[0]} labels for {n} pairs")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("pair labels must be 0 or 1")
    return y
