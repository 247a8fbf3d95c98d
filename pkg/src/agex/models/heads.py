"""The three age-prediction head read-outs and ranking read-outs, as pure math.

Heads map network outputs to years over the nominal integer label grid
0..105: a rectified scalar, a softmax expectation, or a sum of per-label
exceedance probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_AGE_LABELS = 106
AGE_LABELS = np.arange(N_AGE_LABELS, dtype=np.float64)  # 0, 1, ..., 105

HEADS = ("regression", "expectation", "ordinal")


@dataclass(frozen=True)
class AgeEstimate:
    age_years: float
    head: str  # regression | expectation | ordinal | ensemble
    resolution: int

    def __post_init__(self):
        if not np.isfinite(self.age_years) or self.age_years < 0:
            raise ValueError(f"age_years must be finite and >= 0, got {self.age_years}")


@dataclass(frozen=True)
class RankScore:
    """Probability that the second image of a pair shows the older state."""

    p_second_older: float

    def __post_init__(self):
        if not 0.0 <= self.p_second_older <= 1.0:
            raise ValueError(f"p_second_older={self.p_second_older} outside [0, 1]")


def rectified_age(raw_output: float) -> float:
    """Regression head: a single rectified output is the estimate."""
    return max(float(raw_output), 0.0)


def expectation_age(class_probs) -> float:
    """Expectation head: probability-weighted mean of the label grid."""
    p = np.asarray(class_probs, dtype=np.float64)
    if p.shape != (N_AGE_LABELS,):
        raise ValueError(f"expected {N_AGE_LABELS} class probabilities, got shape {p.shape}")
    if np.any(p < 0):
        raise ValueError("class probabilities must be non-negative")
    if abs(p.sum() - 1.0) > 1e-6:
        raise ValueError(f"class probabilities sum to {p.sum():.8f}, not 1")
    return float(np.dot(p, AGE_LABELS))


def ordinal_age(exceed_probs) -> float:
    """Ordinal head: sum of per-label exceedance probabilities, clamped."""
    p = np.asarray(exceed_probs, dtype=np.float64)
    if p.shape != (N_AGE_LABELS,):
        raise ValueError(f"expected {N_AGE_LABELS} exceedance probabilities, got shape {p.shape}")
    if np.any((p < 0) | (p > 1)):
        raise ValueError("exceedance probabilities must lie in [0, 1]")
    return float(min(max(p.sum(), 0.0), 105.0))


def ranking_from_estimates(est_a: AgeEstimate, est_b: AgeEstimate) -> RankScore:
    """Rank a pair from two independent point estimates; ties score 0.5."""
    if est_b.age_years > est_a.age_years:
        return RankScore(1.0)
    if est_b.age_years < est_a.age_years:
        return RankScore(0.0)
    return RankScore(0.5)


def ensemble_estimate(estimates: list[AgeEstimate]) -> AgeEstimate:
    """Arithmetic mean of individual estimates (resolution 0 = mixed)."""
    if not estimates:
        raise ValueError("cannot ensemble zero estimates")
    resolutions = {e.resolution for e in estimates}
    return AgeEstimate(
        age_years=float(np.mean([e.age_years for e in estimates])),
        head="ensemble",
        resolution=resolutions.pop() if len(resolutions) == 1 else 0,
    )
