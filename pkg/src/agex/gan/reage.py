"""Re-aging sweeps, difference maps and the age-targeting diagnostic."""

from __future__ import annotations

import numpy as np

from ..models.estimator import AgeEstimator
from ..phantom.params import check_age
from .model import AgeGan, AgeTarget


def generator_forward(gan: AgeGan, age: AgeTarget | float, w: np.ndarray) -> np.ndarray:
    """One image for one (age, latent) pair."""
    years = age.age_years if isinstance(age, AgeTarget) else float(age)
    return gan.generate([years], np.asarray(w, dtype=np.float32)[None])[0]


def reage_sweep(gan: AgeGan, w: np.ndarray, ages: list[float]) -> np.ndarray:
    """Images of one synthetic patient at ascending target ages: (len, R, R)."""
    ages = [check_age(a) for a in ages]
    if any(b <= a for a, b in zip(ages, ages[1:])):
        raise ValueError("ages must be strictly ascending")
    w = np.asarray(w, dtype=np.float32)
    return gan.generate(np.asarray(ages), np.broadcast_to(w, (len(ages), w.shape[-1])))


def difference_map(young: np.ndarray, old: np.ndarray) -> np.ndarray:
    """Signed pixelwise old - young; antisymmetric under argument swap."""
    young = np.asarray(young, dtype=np.float64)
    old = np.asarray(old, dtype=np.float64)
    if young.shape != old.shape:
        raise ValueError(f"resolution mismatch: {young.shape} vs {old.shape}")
    return old - young


def age_targeting_curve(gan: AgeGan, predictor: AgeEstimator, ages: np.ndarray,
                        n_latents: int = 32, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Target ages vs the frozen predictor's mean estimate on generated images."""
    ages = np.asarray(ages, dtype=np.float64)
    w = gan.sample_latents(n_latents, seed)
    means = np.empty_like(ages)
    for i, a in enumerate(ages):
        imgs = gan.generate(np.full(n_latents, a), w)
        means[i] = float(np.mean(predictor.predict(imgs.astype(np.float32))))
    return ages, means


def age_targeting_mae(gan: AgeGan, predictor: AgeEstimator, ages: np.ndarray,
                      n_latents: int = 32, seed: int = 0) -> float:
    targets, estimates = age_targeting_curve(gan, predictor, ages, n_latents, seed)
    return float(np.mean(np.abs(estimates - targets)))


def diff_mass_in_mask(diff: np.ndarray, mask: np.ndarray) -> float:
    """Fraction of total |diff| mass that falls inside a boolean mask."""
    total = float(np.abs(diff).sum())
    if total == 0.0:
        return 0.0
    return float(np.abs(diff[mask]).sum() / total)
