"""Point metrics and bucketed curves for age predictions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PointMetrics:
    """MAE / signed mean error / error spread / R^2, all in years.

    r_squared is NaN when the truths are constant (variance ratio undefined).
    """

    mae: float
    mean_error: float
    error_sd: float
    r_squared: float
    n: int


def point_metrics(predictions, truths) -> PointMetrics:
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(truths, dtype=np.float64)
    if p.shape != t.shape or p.ndim != 1 or p.size == 0:
        raise ValueError(f"predictions/truths must be equal-length non-empty 1-D arrays, "
                         f"got shapes {p.shape} and {t.shape}")
    err = p - t
    sse = float(np.sum(err ** 2))
    sst = float(np.sum((t - t.mean()) ** 2))
    return PointMetrics(
        mae=float(np.mean(np.abs(err))),
        mean_error=float(np.mean(err)),
        error_sd=float(np.std(err)),
        r_squared=(1.0 - sse / sst) if sst > 0 else math.nan,
        n=p.size,
    )


@dataclass(frozen=True)
class BucketedCurve:
    """Per-bucket mean/sd/count over half-open buckets [k*w, (k+1)*w)."""

    bucket_edges: np.ndarray  # length n_buckets + 1, strictly ascending
    means: np.ndarray         # NaN for empty buckets
    sds: np.ndarray           # NaN for empty buckets
    counts: np.ndarray

    def __post_init__(self):
        if not np.all(np.diff(self.bucket_edges) > 0):
            raise ValueError("bucket edges must be strictly ascending")


def bucketed_stats(pairs, bucket_width: float) -> BucketedCurve:
    """Bucket (key, value) points by key into fixed-width half-open buckets.

    Buckets span the full key range; interior empty buckets are reported
    with count 0.
    """
    if bucket_width <= 0:
        raise ValueError("bucket_width must be > 0")
    pts = np.asarray(list(pairs), dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
        raise ValueError("expected a non-empty sequence of (key, value) pairs")
    keys, values = pts[:, 0], pts[:, 1]
    idx = np.floor(keys / bucket_width).astype(int)
    k_lo, k_hi = int(idx.min()), int(idx.max())
    n_buckets = k_hi - k_lo + 1
    edges = (np.arange(n_buckets + 1) + k_lo) * bucket_width

    means = np.full(n_buckets, np.nan)
    sds = np.full(n_buckets, np.nan)
    counts = np.zeros(n_buckets, dtype=int)
    for b in range(n_buckets):
        sel = values[idx == k_lo + b]
        counts[b] = sel.size
        if sel.size:
            means[b] = sel.mean()
            sds[b] = sel.std()
    return BucketedCurve(bucket_edges=edges, means=means, sds=sds, counts=counts)
