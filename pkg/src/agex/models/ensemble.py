"""Multi-resolution ensembling of age estimators."""

from __future__ import annotations

import numpy as np

from .estimator import AgeEstimator
from .heads import AgeEstimate, ensemble_estimate
from .validation import check_image_batch


def _pick(pyramid: dict[int, np.ndarray], resolution: int) -> np.ndarray:
    if resolution not in pyramid:
        raise ValueError(f"image pyramid is missing resolution {resolution} "
                         f"(has {sorted(pyramid)})")
    return pyramid[resolution]


def ensemble_predict_batch(models: list[AgeEstimator], pyramid: dict[int, np.ndarray]) -> np.ndarray:
    """Mean of each model's predictions at its own resolution.

    `pyramid` maps resolution -> (N, R, R) image stack; all stacks must
    describe the same N subjects in the same order.
    """
    if not models:
        raise ValueError("need at least one model to ensemble")
    preds = []
    n = None
    for m in models:
        X = check_image_batch(_pick(pyramid, m.resolution), m.resolution)
        if n is None:
            n = X.shape[0]
        elif X.shape[0] != n:
            raise ValueError("pyramid levels disagree on the number of images")
        preds.append(m.predict(X))
    return np.mean(preds, axis=0)


def ensemble_predict(models: list[AgeEstimator], pyramid: dict[int, np.ndarray]) -> AgeEstimate:
    """Single-subject version; pyramid holds one image per resolution."""
    single = {res: np.asarray(img, dtype=np.float32)[None] for res, img in pyramid.items()}
    estimates = [AgeEstimate(age_years=float(m.predict(_pick(single, m.resolution))[0]),
                             head=m.head, resolution=m.resolution) for m in models]
    return ensemble_estimate(estimates)
